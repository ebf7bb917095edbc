#pragma once

#include "vemser/geometry.hpp"

#include "json.hpp"

#include <string>

namespace vemser {

/// {"dim": 2|3, "vertices": [[...], ...], "faces": [[i, j, k, ...], ...]}
/// with faces only in 3D. An optional "origin" relocates the scaling origin.
/// Malformed input is a ValidationError.
Element element_from_json(const nlohmann::json &j);
Element load_element(const std::string &path);
nlohmann::json element_to_json(const Element &e);

/// Measure, diameter, convexity, facet count and eta of an element.
nlohmann::json element_summary(const Element &e, const CoverOptions &opt = {});

/// "triangle", "quadrilateral", "polygon", "tetrahedron", "hexahedron" or
/// "polyhedron", by vertex and facet counts.
std::string element_kind(const Element &e);

} // namespace vemser
