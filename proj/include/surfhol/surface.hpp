#pragma once

#include <cstdint>
#include <vector>

#include "surfhol/plaquette.hpp"

namespace surfhol {

/// Rectangular grid of plaquettes; row 0 is the bottom row, column 0 the left column.
/// Adjacent cells share edges: cell(i,j).b == cell(i,j+1).d and cell(i,j).c == cell(i+1,j).a.
class PlaquetteGrid {
 public:
  /// `cells` in row-major order. Throws ComposabilityError naming the first
  /// offending pair of cells.
  PlaquetteGrid(int rows, int cols, std::vector<Plaquette> cells);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Plaquette& cell(int i, int j) const { return cells_[static_cast<std::size_t>(i * cols_ + j)]; }
  const std::vector<Plaquette>& cells() const { return cells_; }

 private:
  int rows_;
  int cols_;
  std::vector<Plaquette> cells_;
};

enum class FoldOrder { rows_first, cols_first };

/// rows_first: hcompose each row left to right, then vcompose the row composites
/// bottom to top. cols_first is the dual.
Plaquette grid_compose(const PlaquetteGrid& grid, FoldOrder order,
                       CompositionConvention conv = CompositionConvention::closure_consistent);

/// Random composable grid: shared edges are drawn once and every top edge is
/// solved from the fake-flatness constraint.
PlaquetteGrid random_flat_grid(CrossedModulePtr cm, int rows, int cols, std::uint64_t seed);

/// 1e-12 * 10 * (rows*cols), capped at 1e-8.
double grid_tolerance(int rows, int cols);

}  // namespace surfhol
