#ifndef FLOWERLAB_IO_HPP
#define FLOWERLAB_IO_HPP

// JSON body files.
//
//   {
//     "dim": 2,
//     "representation": "radial" | "support" | "petals" | "polytope",
//     "grid": {"type": "uniform-angle", "n": 720}
//           | {"type": "directions", "vectors": [[...], ...], "weights": [...]},
//     "values": [...],        radial / support
//     "radial": [...],        optional companion radial of a support body
//     "reciprocal": true,     optional; values hold 1/r (radial files)
//     "points": [[...], ...], petals / polytope
//     "kind": "out-cone",     optional; polytope files
//     "metadata": {...}
//   }
//
// Keys are written in this order, so parse followed by serialize gives back
// the same bytes for files this module wrote.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowerlab/bodies.hpp"
#include "flowerlab/inversion.hpp"

namespace flowerlab {

using Json = nlohmann::ordered_json;

enum class Representation { Radial, Support, Petals, Polytope };

inline std::string to_string(Representation r) {
  switch (r) {
    case Representation::Radial: return "radial";
    case Representation::Support: return "support";
    case Representation::Petals: return "petals";
    case Representation::Polytope: return "polytope";
  }
  return "?";
}

struct GridSpec {
  enum class Type { UniformAngle, Directions } type = Type::UniformAngle;
  int n = kDefaultGridSize;
  Matrix vectors;  // dim x N
  Vector weights;

  static GridSpec of(const DirectionGrid& g) {
    GridSpec s;
    if (g.is_uniform_angle()) {
      s.n = static_cast<int>(g.size());
      return s;
    }
    s.type = Type::Directions;
    s.n = static_cast<int>(g.size());
    s.vectors = g.directions();
    s.weights = g.weights();
    return s;
  }

  GridRef build() const {
    if (type == Type::UniformAngle) return uniform_angle_grid(n);
    return DirectionGrid::from_directions(vectors, weights);
  }
};

struct BodyFile {
  int dim = 2;
  Representation representation = Representation::Radial;
  std::optional<GridSpec> grid;
  std::vector<double> values;
  std::optional<std::vector<double>> radial;
  bool reciprocal = false;
  std::vector<Vector> points;
  bool out_cone = false;
  Json metadata = Json::object();
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Schema, where + ": " + what);
}

inline const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

inline std::vector<double> read_reals(const Json& j, const std::string& where, bool positive) {
  if (!j.is_array()) schema_error(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_error(where + "/" + std::to_string(i), "expected a number");
    const double v = j[i].get<double>();
    if (positive && !(v > 0.0))
      schema_error(where + "/" + std::to_string(i), "value must be strictly positive (index " + std::to_string(i) + ")");
    out.push_back(v);
  }
  return out;
}

inline std::vector<Vector> read_points(const Json& j, const std::string& where, int dim) {
  if (!j.is_array()) schema_error(where, "expected an array of points");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = read_reals(j[i], where + "/" + std::to_string(i), false);
    if (static_cast<int>(v.size()) != dim)
      schema_error(where + "/" + std::to_string(i), "point has " + std::to_string(v.size()) + " coordinates, dim is " +
                                                        std::to_string(dim));
    out.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  return out;
}

inline Json write_point(const Vector& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

}  // namespace detail

inline BodyFile body_from_json(const Json& j) {
  BodyFile b;
  const Json& d = detail::require(j, "dim", "");
  if (!d.is_number_integer() || d.get<int>() < 1) detail::schema_error("/dim", "expected a positive integer");
  b.dim = d.get<int>();
  const Json& rep = detail::require(j, "representation", "");
  if (!rep.is_string()) detail::schema_error("/representation", "expected a string");
  const auto r = rep.get<std::string>();
  if (r == "radial") b.representation = Representation::Radial;
  else if (r == "support") b.representation = Representation::Support;
  else if (r == "petals") b.representation = Representation::Petals;
  else if (r == "polytope") b.representation = Representation::Polytope;
  else detail::schema_error("/representation", "unknown representation \"" + r + "\"");

  if (auto it = j.find("grid"); it != j.end()) {
    const Json& g = *it;
    const auto type = detail::require(g, "type", "/grid");
    GridSpec spec;
    if (type == "uniform-angle") {
      const Json& n = detail::require(g, "n", "/grid");
      if (!n.is_number_integer()) detail::schema_error("/grid/n", "expected an integer");
      spec.n = n.get<int>();
      if (b.dim != 2) detail::schema_error("/grid", "uniform-angle grids are two-dimensional");
    } else if (type == "directions") {
      spec.type = GridSpec::Type::Directions;
      const auto vecs = detail::read_points(detail::require(g, "vectors", "/grid"), "/grid/vectors", b.dim);
      const auto w = detail::read_reals(detail::require(g, "weights", "/grid"), "/grid/weights", false);
      if (w.size() != vecs.size()) detail::schema_error("/grid/weights", "length differs from /grid/vectors");
      spec.n = static_cast<int>(vecs.size());
      spec.vectors.resize(b.dim, spec.n);
      for (int i = 0; i < spec.n; ++i) spec.vectors.col(i) = vecs[static_cast<std::size_t>(i)];
      spec.weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    } else {
      detail::schema_error("/grid/type", "unknown grid type");
    }
    b.grid = std::move(spec);
  }

  const bool sampled = b.representation == Representation::Radial || b.representation == Representation::Support;
  if (sampled) {
    if (!b.grid) detail::schema_error("", "missing field \"grid\"");
    b.values = detail::read_reals(detail::require(j, "values", ""), "/values", true);
    if (static_cast<int>(b.values.size()) != b.grid->n)
      detail::schema_error("/values", "length " + std::to_string(b.values.size()) + " does not match grid size " +
                                          std::to_string(b.grid->n));
    if (auto it = j.find("radial"); it != j.end()) {
      if (b.representation != Representation::Support) detail::schema_error("/radial", "only support files carry a radial");
      b.radial = detail::read_reals(*it, "/radial", true);
      if (b.radial->size() != b.values.size()) detail::schema_error("/radial", "length does not match grid size");
    }
    if (auto it = j.find("reciprocal"); it != j.end()) {
      if (!it->is_boolean()) detail::schema_error("/reciprocal", "expected a boolean");
      if (b.representation != Representation::Radial) detail::schema_error("/reciprocal", "only radial files");
      b.reciprocal = it->get<bool>();
    }
  } else {
    b.points = detail::read_points(detail::require(j, "points", ""), "/points", b.dim);
    if (b.points.empty()) detail::schema_error("/points", "at least one point is required");
    if (auto it = j.find("kind"); it != j.end()) {
      if (b.representation != Representation::Polytope) detail::schema_error("/kind", "only polytope files");
      if (*it == "out-cone") b.out_cone = true;
      else if (*it != "bounded") detail::schema_error("/kind", "expected \"bounded\" or \"out-cone\"");
    }
  }
  if (auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_object()) detail::schema_error("/metadata", "expected an object");
    b.metadata = *it;
  }
  return b;
}

inline Json body_to_json(const BodyFile& b) {
  Json j;
  j["dim"] = b.dim;
  j["representation"] = to_string(b.representation);
  if (b.grid) {
    Json g;
    if (b.grid->type == GridSpec::Type::UniformAngle) {
      g["type"] = "uniform-angle";
      g["n"] = b.grid->n;
    } else {
      g["type"] = "directions";
      Json v = Json::array();
      for (Eigen::Index i = 0; i < b.grid->vectors.cols(); ++i) v.push_back(detail::write_point(b.grid->vectors.col(i)));
      g["vectors"] = std::move(v);
      g["weights"] = std::vector<double>(b.grid->weights.data(), b.grid->weights.data() + b.grid->weights.size());
    }
    j["grid"] = std::move(g);
  }
  if (b.representation == Representation::Radial || b.representation == Representation::Support) {
    j["values"] = b.values;
    if (b.radial) j["radial"] = *b.radial;
    if (b.reciprocal) j["reciprocal"] = true;
  } else {
    Json p = Json::array();
    for (const auto& x : b.points) p.push_back(detail::write_point(x));
    j["points"] = std::move(p);
    if (b.representation == Representation::Polytope && b.out_cone) j["kind"] = "out-cone";
  }
  j["metadata"] = b.metadata;
  return j;
}

inline std::string serialize_body(const BodyFile& b) { return body_to_json(b).dump(2) + "\n"; }

inline BodyFile parse_body_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports a byte offset; turn it into line:column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  return body_from_json(j);
}

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
}

inline BodyFile parse_body(const std::string& path) { return parse_body_text(read_text(path)); }
inline void serialize_body(const BodyFile& b, const std::string& path) { write_text(path, serialize_body(b)); }

// --- conversions -------------------------------------------------------------

inline void require_representation(const BodyFile& b, Representation r, const char* op) {
  if (b.representation != r)
    throw Error(ErrorKind::RepresentationRequired,
                std::string(op) + " needs a " + to_string(r) + " body, got " + to_string(b.representation));
}

inline StarBody star_of(const BodyFile& b, const GridRef& grid) {
  require_representation(b, Representation::Radial, "star_of");
  if (!b.reciprocal) return StarBody(grid, b.values);
  return StarBody(grid, detail::reciprocal(b.values));
}

inline ConvexBody convex_of(const BodyFile& b, const GridRef& grid) {
  require_representation(b, Representation::Support, "convex_of");
  if (b.radial) return ConvexBody::from_samples(grid, b.values, *b.radial);
  return ConvexBody::from_support(grid, b.values);
}

inline OffOriginPolytope polytope_of(const BodyFile& b) {
  require_representation(b, Representation::Polytope, "polytope_of");
  return OffOriginPolytope(b.points, b.out_cone ? OffOriginPolytope::Kind::OutCone : OffOriginPolytope::Kind::Bounded);
}

inline BodyFile file_of(const StarBody& s, Json metadata = Json::object()) {
  BodyFile b;
  b.dim = s.dim();
  b.representation = Representation::Radial;
  b.grid = GridSpec::of(s.grid());
  b.values = s.radial();
  b.metadata = std::move(metadata);
  return b;
}

inline BodyFile file_of(const ConvexBody& k, Json metadata = Json::object()) {
  BodyFile b;
  b.dim = k.dim();
  b.representation = Representation::Support;
  b.grid = GridSpec::of(k.grid());
  b.values = k.support();
  b.radial = k.radial();
  b.metadata = std::move(metadata);
  return b;
}

inline BodyFile file_of_points(Representation rep, std::vector<Vector> pts, std::optional<GridSpec> grid,
                               Json metadata = Json::object()) {
  BodyFile b;
  b.dim = static_cast<int>(pts.front().size());
  b.representation = rep;
  b.grid = std::move(grid);
  b.points = std::move(pts);
  b.metadata = std::move(metadata);
  return b;
}

}  // namespace flowerlab

#endif  // FLOWERLAB_IO_HPP
