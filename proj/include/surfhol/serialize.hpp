#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "surfhol/algebra.hpp"
#include "surfhol/pathspace.hpp"
#include "surfhol/plaquette.hpp"
#include "surfhol/surface.hpp"

namespace surfhol {

using Json = nlohmann::json;

// Matrices are row-major nested arrays. Real groups use plain numbers; U(1)
// entries are [re, im] pairs. R^n elements are n x 1 columns: [[x1], [x2], ...].

Json group_to_json(const GroupElement& g);
GroupElement group_from_json(const Json& j, GroupTag tag);

/// {a, b, c, d, h, instance}
Json plaquette_to_json(const Plaquette& p);
/// Resolves the crossed module from "instance". Fake-flatness is not enforced
/// here (composites under the literal convention need not be flat).
Plaquette plaquette_from_json(const Json& j);

/// {rows, cols, cells}, cells row-major with row 0 at the bottom.
Json grid_to_json(const PlaquetteGrid& grid);
PlaquetteGrid grid_from_json(const Json& j);

/// One sample per line, comma separated, no header. Blank lines and lines
/// starting with '#' are skipped; all rows must have the same width.
std::vector<Vector> read_csv_rows(const std::string& path);

}  // namespace surfhol
