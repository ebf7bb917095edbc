#include "vemser/element_io.hpp"

#include "vemser/errors.hpp"

#include <fstream>

namespace vemser {

namespace {

VectorXd point(const nlohmann::json &p, int dim, const std::string &what) {
  if (!p.is_array() || static_cast<int>(p.size()) != dim)
    throw ValidationError(what + " must be an array of " + std::to_string(dim) + " numbers");
  VectorXd x(dim);
  for (int i = 0; i < dim; ++i) {
    if (!p[i].is_number()) throw ValidationError(what + " has a non-numeric coordinate");
    x(i) = p[i].get<double>();
    if (!std::isfinite(x(i))) throw ValidationError(what + " has a non-finite coordinate");
  }
  return x;
}

} // namespace

Element element_from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw ValidationError("element JSON must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw ValidationError("element JSON needs an integer \"dim\"");
  const int dim = j["dim"].get<int>();
  if (dim != 2 && dim != 3) throw ValidationError("\"dim\" must be 2 or 3, got " + std::to_string(dim));
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw ValidationError("element JSON needs a \"vertices\" array");
  const auto &vs = j["vertices"];

  Element e;
  if (dim == 2) {
    if (j.contains("faces")) throw ValidationError("\"faces\" is only allowed for dim 3");
    std::vector<Vector2d> v;
    for (std::size_t i = 0; i < vs.size(); ++i) v.push_back(point(vs[i], 2, "vertex " + std::to_string(i)));
    e = Element(Polygon(std::move(v)));
  } else {
    if (!j.contains("faces") || !j["faces"].is_array()) throw ValidationError("3D element JSON needs a \"faces\" array");
    std::vector<Vector3d> v;
    for (std::size_t i = 0; i < vs.size(); ++i) v.push_back(point(vs[i], 3, "vertex " + std::to_string(i)));
    std::vector<std::vector<int>> faces;
    for (const auto &f : j["faces"]) {
      if (!f.is_array()) throw ValidationError("each face must be an array of vertex indices");
      std::vector<int> idx;
      for (const auto &i : f) {
        if (!i.is_number_integer()) throw ValidationError("face vertex indices must be integers");
        idx.push_back(i.get<int>());
      }
      faces.push_back(std::move(idx));
    }
    e = Element(Polyhedron(std::move(v), std::move(faces)));
  }
  if (j.contains("origin")) e = e.with_origin(point(j["origin"], dim, "origin"));
  return e;
}

Element load_element(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open element file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &err) {
    throw ValidationError("bad JSON in " + path + ": " + err.what());
  }
  try {
    return element_from_json(j);
  } catch (const ValidationError &err) {
    throw ValidationError(path + ": " + err.what());
  }
}

nlohmann::json element_to_json(const Element &e) {
  nlohmann::json j;
  j["dim"] = e.dim();
  nlohmann::json vs = nlohmann::json::array();
  for (int i = 0; i < e.num_vertices(); ++i) {
    const VectorXd v = e.vertex(i);
    vs.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  }
  j["vertices"] = vs;
  if (e.dim() == 3) {
    nlohmann::json fs = nlohmann::json::array();
    for (const auto &f : e.polyhedron().faces()) fs.push_back(f.verts);
    j["faces"] = fs;
  }
  return j;
}

std::string element_kind(const Element &e) {
  if (e.dim() == 2) {
    const int n = e.polygon().size();
    return n == 3 ? "triangle" : n == 4 ? "quadrilateral" : "polygon";
  }
  if (e.polyhedron().is_tetrahedron()) return "tetrahedron";
  if (e.num_vertices() == 8 && e.num_facets() == 6) return "hexahedron";
  return "polyhedron";
}

nlohmann::json element_summary(const Element &e, const CoverOptions &opt) {
  const VectorXd o = e.origin();
  nlohmann::json j = {{"dim", e.dim()},
                      {"kind", element_kind(e)},
                      {"vertices", e.num_vertices()},
                      {"facets", e.num_facets()},
                      {"measure", e.measure()},
                      {"diameter", e.h()},
                      {"convex", e.is_convex()},
                      {"origin", std::vector<double>(o.data(), o.data() + o.size())}};
  j["eta"] = eta_cover(e, opt).eta;
  return j;
}

} // namespace vemser
