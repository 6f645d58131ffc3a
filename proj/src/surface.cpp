#include "surfhol/surface.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <string>

#include "surfhol/errors.hpp"

namespace surfhol {

namespace {

std::string cell_name(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

}  // namespace

PlaquetteGrid::PlaquetteGrid(int rows, int cols, std::vector<Plaquette> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows_ < 1 || cols_ < 1) throw UsageError("grid needs at least one row and one column");
  if (cells_.size() != static_cast<std::size_t>(rows_ * cols_)) {
    throw UsageError("grid cell count does not match rows*cols");
  }
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      const Plaquette& p = cell(i, j);
      if (j + 1 < cols_ && distance(p.b(), cell(i, j + 1).d()) > kComposeTolerance) {
        throw ComposabilityError("cells " + cell_name(i, j) + " and " + cell_name(i, j + 1) +
                                 " do not share a vertical edge");
      }
      if (i + 1 < rows_ && distance(p.c(), cell(i + 1, j).a()) > kComposeTolerance) {
        throw ComposabilityError("cells " + cell_name(i, j) + " and " + cell_name(i + 1, j) +
                                 " do not share a horizontal edge");
      }
    }
  }
}

Plaquette grid_compose(const PlaquetteGrid& grid, FoldOrder order, CompositionConvention conv) {
  const int outer = order == FoldOrder::rows_first ? grid.rows() : grid.cols();
  const int inner = order == FoldOrder::rows_first ? grid.cols() : grid.rows();
  auto at = [&](int o, int k) -> const Plaquette& {
    return order == FoldOrder::rows_first ? grid.cell(o, k) : grid.cell(k, o);
  };
  auto inner_op = [&](const Plaquette& x, const Plaquette& y) {
    return order == FoldOrder::rows_first ? hcompose(x, y, conv) : vcompose(x, y, conv);
  };
  auto outer_op = [&](const Plaquette& x, const Plaquette& y) {
    return order == FoldOrder::rows_first ? vcompose(x, y, conv) : hcompose(x, y, conv);
  };

  std::optional<Plaquette> total;
  for (int o = 0; o < outer; ++o) {
    Plaquette strip = at(o, 0);
    for (int k = 1; k < inner; ++k) strip = inner_op(strip, at(o, k));
    total = total ? outer_op(*total, strip) : strip;
  }
  return *total;
}

PlaquetteGrid random_flat_grid(CrossedModulePtr cm, int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw UsageError("random_flat_grid: rows and cols must be >= 1");
  std::mt19937_64 rng(seed);
  const GroupTag g = cm->g;

  // Bottom horizontal edges, all vertical edges and all faces are free.
  std::vector<GroupElement> bottom;
  for (int j = 0; j < cols; ++j) bottom.push_back(random_element(g, rng));
  std::vector<std::vector<GroupElement>> vertical(static_cast<std::size_t>(rows));
  for (auto& row : vertical) {
    for (int j = 0; j <= cols; ++j) row.push_back(random_element(g, rng));
  }
  std::vector<GroupElement> faces;
  for (int k = 0; k < rows * cols; ++k) faces.push_back(random_element(cm->h, rng));

  std::vector<Plaquette> cells;
  cells.reserve(static_cast<std::size_t>(rows * cols));
  std::vector<GroupElement> below = bottom;
  for (int i = 0; i < rows; ++i) {
    std::vector<GroupElement> above;
    for (int j = 0; j < cols; ++j) {
      const auto& row = vertical[static_cast<std::size_t>(i)];
      Plaquette p = make_flat_plaquette(below[static_cast<std::size_t>(j)], row[static_cast<std::size_t>(j + 1)],
                                        row[static_cast<std::size_t>(j)],
                                        faces[static_cast<std::size_t>(i * cols + j)], cm);
      above.push_back(p.c());
      cells.push_back(std::move(p));
    }
    below = std::move(above);
  }
  return {rows, cols, std::move(cells)};
}

double grid_tolerance(int rows, int cols) {
  return std::min(1e-12 * 10.0 * static_cast<double>(rows) * static_cast<double>(cols), 1e-8);
}

}  // namespace surfhol
