#include "io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace normkit::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double real_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ParseError("expected a number, got " + j.dump());
}

template <class Scalar>
void check_mode(const json& j) {
  if (!j.is_object() || !j.contains("mode")) return;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "complex") {
    if constexpr (!is_complex_v<Scalar>) throw ComplexEntry();
  } else if (mode != "real") {
    throw ParseError("mode must be \"real\" or \"complex\"");
  }
}

std::vector<Vector> real_vectors(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of vectors");
  std::vector<Vector> out;
  for (const json& v : j) out.push_back(vector_from<double>(v));
  return out;
}

Matrix columns(const std::vector<Vector>& vs, Eigen::Index n) {
  Matrix m(n, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (vs[k].size() != n) throw ParseError("vectors of different lengths");
    m.col(static_cast<Eigen::Index>(k)) = vs[k];
  }
  return m;
}

}  // namespace

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Exponent exponent_from(const json& j) {
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  if (j.is_number()) return Exponent(j.get<double>());
  throw ParseError("exponent must be a number or \"inf\"");
}

Exponent parse_exponent(const std::string& text) {
  if (text == "inf") return Exponent::inf();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("bad exponent \"" + text + "\"");
  }
  if (used != text.size() || std::isinf(p)) throw ParseError("bad exponent \"" + text + "\" (spell infinity inf)");
  return Exponent(p);
}

template <class Scalar>
Scalar scalar_from(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError("complex entries are [re, im] pairs");
    if constexpr (is_complex_v<Scalar>) {
      return Scalar(real_from(j[0]), real_from(j[1]));
    } else {
      throw ComplexEntry();
    }
  }
  return Scalar(real_from(j));
}

template <class Scalar>
Vec<Scalar> vector_from(const json& j) {
  check_mode<Scalar>(j);
  const json& entries = j.is_object() ? field(j, "entries") : j;
  if (!entries.is_array()) throw ParseError("vector entries must be an array");
  Vec<Scalar> v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = scalar_from<Scalar>(entries[i]);
  return v;
}

template <class Scalar>
Mat<Scalar> matrix_from(const json& j) {
  check_mode<Scalar>(j);
  const json* rows = &j;
  if (j.is_object()) rows = j.contains("rows") ? &j.at("rows") : &field(j, "matrix");
  if (!rows->is_array() || rows->empty()) throw ParseError("matrix must be a nonempty array of rows");
  const std::size_t cols = (*rows)[0].size();
  Mat<Scalar> m(static_cast<Eigen::Index>(rows->size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows->size(); ++i) {
    const json& row = (*rows)[i];
    if (!row.is_array() || row.size() != cols) throw ParseError("matrix rows must be arrays of equal length");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = scalar_from<Scalar>(row[k]);
  }
  return m;
}

template <class Scalar>
NormSpec<Scalar> norm_from(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "p") return NormSpec<Scalar>::p(exponent_from(field(j, "p")));
  if (kind == "gram") return NormSpec<Scalar>::inner_product(matrix_from<Scalar>(field(j, "matrix")));
  throw ParseError("norm kind must be \"p\" or \"gram\"");
}

template <class Scalar>
Functional<Scalar> functional_from(const json& j) {
  Functional<Scalar> f;
  f.weights = vector_from<Scalar>(field(j, "weights"));
  if (j.contains("norm")) f.space_norm = norm_from<Scalar>(j.at("norm"));
  return f;
}

template <class Scalar>
LinearMap<Scalar> map_from(const json& j) {
  LinearMap<Scalar> t;
  t.matrix = matrix_from<Scalar>(j.is_object() ? field(j, "matrix") : j);
  if (j.is_object() && j.contains("domain")) t.domain = norm_from<Scalar>(j.at("domain"));
  if (j.is_object() && j.contains("codomain")) t.codomain = norm_from<Scalar>(j.at("codomain"));
  return t;
}

template <class Scalar>
Subspace<Scalar> subspace_from(const json& j) {
  const json& basis = field(j, "basis");
  if (!basis.is_array()) throw ParseError("basis must be an array of vectors");
  std::vector<Vec<Scalar>> vs;
  for (const json& v : basis) vs.push_back(vector_from<Scalar>(v));
  Eigen::Index n = 0;
  if (j.contains("dimension")) {
    n = j.at("dimension").get<Eigen::Index>();
  } else if (!vs.empty()) {
    n = vs.front().size();
  } else {
    throw ParseError("an empty basis needs \"dimension\"");
  }
  for (const auto& v : vs)
    if (v.size() != n) throw ParseError("basis vectors must have the ambient dimension");
  Mat<Scalar> m(n, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vs[k];
  return Subspace<Scalar>(m);
}

template <class Scalar>
VectorField<Scalar> field_from(const json& j) {
  VectorField<Scalar> f;
  // values: one row per point, as written; stored one column per point
  f.values = matrix_from<Scalar>(field(j, "values")).transpose();
  if (j.contains("value_norm")) f.value_norm = norm_from<Scalar>(j.at("value_norm"));
  return f;
}

template <class Scalar>
RankOneDecomposition<Scalar> decomposition_from(const json& j, const NormSpec<Scalar>& domain) {
  RankOneDecomposition<Scalar> d;
  const json& terms = field(j, "terms");
  if (!terms.is_array()) throw ParseError("terms must be an array");
  for (const json& t : terms) {
    RankOneTerm<Scalar> term;
    term.lambda = functional_from<Scalar>(field(t, "lambda"));
    if (!field(t, "lambda").contains("norm")) term.lambda.space_norm = domain;
    term.w = vector_from<Scalar>(field(t, "w"));
    d.terms.push_back(std::move(term));
  }
  return d;
}

template <class Scalar>
SelfAdjointMap<Scalar> hermitian_from(const json& j) {
  if (!j.is_object() || !j.contains("hermitian") || j.at("hermitian") != true)
    throw ParseError("self-adjoint maps need \"hermitian\": true");
  return SelfAdjointMap<Scalar>(matrix_from<Scalar>(field(j, "matrix")));
}

ConvexSet set_from(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "halfspace") return ConvexSet::halfspace(vector_from<double>(field(j, "a")), real_from(field(j, "b")));
  if (kind == "box") return ConvexSet::box(vector_from<double>(field(j, "lo")), vector_from<double>(field(j, "hi")));
  if (kind == "pball") {
    const double radius = j.contains("radius") ? real_from(j.at("radius")) : 1.0;
    return ConvexSet::ball(exponent_from(field(j, "p")), radius, vector_from<double>(field(j, "center")));
  }
  if (kind == "orthant") return ConvexSet::orthant(field(j, "dimension").get<Eigen::Index>());
  if (kind == "cone") {
    const auto gens = real_vectors(field(j, "generators"));
    if (gens.empty()) throw ParseError("a cone needs at least one generator");
    return ConvexSet::cone(columns(gens, gens.front().size()));
  }
  if (kind == "point") return ConvexSet::point(vector_from<double>(field(j, "x")));
  if (kind == "affine") {
    const Vector offset = vector_from<double>(field(j, "offset"));
    return sets::AffineSubspace{columns(real_vectors(field(j, "basis")), offset.size()), offset};
  }
  if (kind == "polytope") {
    sets::Polytope poly;
    for (const json& h : field(j, "halfspaces"))
      poly.halfspaces.push_back({vector_from<double>(field(h, "a")), real_from(field(h, "b"))});
    poly.feasible_point = vector_from<double>(field(j, "feasible_point"));
    return poly;
  }
  if (kind == "intersection") {
    sets::Intersection meet;
    for (const json& part : field(j, "parts")) meet.parts.push_back(set_from(part));
    return meet;
  }
  throw ParseError("unknown set kind \"" + kind + "\"");
}

json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

template <class Scalar>
json to_json(const Vec<Scalar>& v) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (is_complex_v<Scalar>) {
      entries.push_back(json::array({number(v(i).real()), number(v(i).imag())}));
    } else {
      entries.push_back(number(v(i)));
    }
  }
  return {{"mode", is_complex_v<Scalar> ? "complex" : "real"}, {"entries", entries}};
}

template <class Scalar>
json matrix_to_json(const Mat<Scalar>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json<Scalar>(Vec<Scalar>(m.row(i).transpose()))["entries"]);
  return {{"mode", is_complex_v<Scalar> ? "complex" : "real"}, {"rows", rows}};
}

template <class Scalar>
json to_json(const NormSpec<Scalar>& norm) {
  if (norm.is_p()) {
    const Exponent e = norm.exponent();
    return {{"kind", "p"}, {"p", e.is_inf() ? json("inf") : json(e.value())}};
  }
  if (norm.is_inner_product()) return {{"kind", "gram"}, {"matrix", matrix_to_json<Scalar>(norm.gram())["rows"]}};
  return {{"kind", "custom"}, {"name", norm.name()}};
}

template <class Scalar>
json to_json(const Functional<Scalar>& f) {
  return {{"weights", to_json<Scalar>(f.weights)}, {"norm", to_json<Scalar>(f.space_norm)}};
}

template <class Scalar>
json to_json(const CertifiedValue<Scalar>& c) {
  json out = {{"value", number(c.value())},
              {"lower", number(c.lower)},
              {"upper", number(c.upper)},
              {"exact", c.exact},
              {"iterations", c.iterations}};
  if (c.witness) out["witness"] = to_json<Scalar>(*c.witness);
  return out;
}

template <class Scalar>
json to_json(const RankOneDecomposition<Scalar>& d) {
  json terms = json::array();
  for (const auto& t : d.terms) terms.push_back({{"lambda", to_json<Scalar>(t.lambda)}, {"w", to_json<Scalar>(t.w)}});
  return {{"terms", terms}};
}

json to_json(const Hyperplane& h) { return {{"normal", to_json<double>(h.normal)}, {"offset", number(h.offset)}}; }

#define NORMKIT_INSTANTIATE(S)                                                            \
  template S scalar_from<S>(const json&);                                                 \
  template Vec<S> vector_from<S>(const json&);                                            \
  template Mat<S> matrix_from<S>(const json&);                                            \
  template NormSpec<S> norm_from<S>(const json&);                                         \
  template Functional<S> functional_from<S>(const json&);                                 \
  template LinearMap<S> map_from<S>(const json&);                                         \
  template Subspace<S> subspace_from<S>(const json&);                                     \
  template VectorField<S> field_from<S>(const json&);                                     \
  template RankOneDecomposition<S> decomposition_from<S>(const json&, const NormSpec<S>&); \
  template SelfAdjointMap<S> hermitian_from<S>(const json&);                              \
  template json to_json<S>(const Vec<S>&);                                                \
  template json matrix_to_json<S>(const Mat<S>&);                                         \
  template json to_json<S>(const NormSpec<S>&);                                           \
  template json to_json<S>(const Functional<S>&);                                         \
  template json to_json<S>(const CertifiedValue<S>&);                                     \
  template json to_json<S>(const RankOneDecomposition<S>&);

NORMKIT_INSTANTIATE(double)
NORMKIT_INSTANTIATE(Complex)
#undef NORMKIT_INSTANTIATE

}  // namespace normkit::io
