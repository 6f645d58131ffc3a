#include "surfhol/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "surfhol/errors.hpp"

namespace surfhol {

namespace {

Complex entry_from_json(const Json& e, bool complex_entries) {
  if (complex_entries) {
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      return {e[0].get<double>(), e[1].get<double>()};
    }
    if (e.is_number()) return {e.get<double>(), 0.0};
    throw UsageError("expected [re, im] pair in complex matrix");
  }
  if (!e.is_number()) throw UsageError("expected number in real matrix");
  return {e.get<double>(), 0.0};
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json group_to_json(const GroupElement& g) {
  const bool cplx = g.tag().is_complex();
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < g.matrix().rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < g.matrix().cols(); ++k) {
      const Complex z = g.matrix()(i, k);
      if (cplx) {
        row.push_back(Json::array({z.real(), z.imag()}));
      } else {
        row.push_back(z.real());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

GroupElement group_from_json(const Json& j, GroupTag tag) {
  if (!j.is_array() || static_cast<int>(j.size()) != tag.rows()) {
    throw UsageError("matrix for " + tag.name() + " needs " + std::to_string(tag.rows()) + " rows");
  }
  Matrix m(tag.rows(), tag.cols());
  for (int i = 0; i < tag.rows(); ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != tag.cols()) {
      throw UsageError("matrix for " + tag.name() + " needs " + std::to_string(tag.cols()) + " columns");
    }
    for (int k = 0; k < tag.cols(); ++k) m(i, k) = entry_from_json(row[static_cast<std::size_t>(k)], tag.is_complex());
  }
  GroupElement g(tag, std::move(m));
  if (g.constraint_violation() > 1e-8) {
    throw UsageError("matrix is not an element of " + tag.name() + " (violation " +
                     std::to_string(g.constraint_violation()) + ")");
  }
  return g;
}

Json plaquette_to_json(const Plaquette& p) {
  return Json{{"a", group_to_json(p.a())}, {"b", group_to_json(p.b())}, {"c", group_to_json(p.c())},
              {"d", group_to_json(p.d())}, {"h", group_to_json(p.h())}, {"instance", p.module().name}};
}

Plaquette plaquette_from_json(const Json& j) {
  const Json& inst = field(j, "instance");
  if (!inst.is_string()) throw UsageError("'instance' must be a string");
  CrossedModulePtr cm = instance_from_name(inst.get<std::string>());
  auto edge = [&](const char* key) { return group_from_json(field(j, key), cm->g); };
  GroupElement a = edge("a"), b = edge("b"), c = edge("c"), d = edge("d");
  GroupElement h = group_from_json(field(j, "h"), cm->h);
  return {std::move(cm), std::move(a), std::move(b), std::move(c), std::move(d), std::move(h)};
}

Json grid_to_json(const PlaquetteGrid& grid) {
  Json cells = Json::array();
  for (const auto& p : grid.cells()) cells.push_back(plaquette_to_json(p));
  return Json{{"rows", grid.rows()}, {"cols", grid.cols()}, {"cells", std::move(cells)}};
}

PlaquetteGrid grid_from_json(const Json& j) {
  const Json& rows = field(j, "rows");
  const Json& cols = field(j, "cols");
  const Json& cells = field(j, "cells");
  if (!rows.is_number_integer() || !cols.is_number_integer() || !cells.is_array()) {
    throw UsageError("grid needs integer rows/cols and a cells array");
  }
  std::vector<Plaquette> parsed;
  parsed.reserve(cells.size());
  for (const auto& c : cells) parsed.push_back(plaquette_from_json(c));
  return {rows.get<int>(), cols.get<int>(), std::move(parsed)};
}

std::vector<Vector> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open CSV file '" + path + "'");
  std::vector<Vector> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      const std::string trimmed = first == std::string::npos ? "" : cell.substr(first, last - first + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
      if (trimmed.empty() || ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
        throw UsageError(path + ":" + std::to_string(line_no) + ": not a number: '" + trimmed + "'");
      }
      values.push_back(v);
    }
    if (!rows.empty() && static_cast<Eigen::Index>(values.size()) != rows.front().size()) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": row width differs from the first row");
    }
    rows.push_back(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  if (rows.empty()) throw UsageError("CSV file '" + path + "' has no rows");
  return rows;
}

}  // namespace surfhol
