#pragma once

// JSON reading and writing for the command-line front end.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "normkit/normkit.hpp"

namespace normkit::io {

using json = nlohmann::json;

/// Malformed input: bad JSON, missing fields, wrong shapes.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A complex entry (or "mode": "complex") met while reading in real mode.
class ComplexEntry : public ParseError {
 public:
  ComplexEntry() : ParseError("complex entry in a real-mode document") {}
};

json read_file(const std::string& path);

/// "inf" or a real number >= 1.
Exponent exponent_from(const json& j);
Exponent parse_exponent(const std::string& text);

template <class Scalar>
Scalar scalar_from(const json& j);

/// {"mode": ..., "entries": [...]} or a bare array.
template <class Scalar>
Vec<Scalar> vector_from(const json& j);

/// Row-major array of rows, or {"rows": [...]} / {"matrix": [...]}.
template <class Scalar>
Mat<Scalar> matrix_from(const json& j);

/// {"kind": "p", "p": 2 | "inf"} or {"kind": "gram", "matrix": [[...]]}.
template <class Scalar>
NormSpec<Scalar> norm_from(const json& j);

template <class Scalar>
Functional<Scalar> functional_from(const json& j);

template <class Scalar>
LinearMap<Scalar> map_from(const json& j);

template <class Scalar>
Subspace<Scalar> subspace_from(const json& j);

template <class Scalar>
VectorField<Scalar> field_from(const json& j);

template <class Scalar>
RankOneDecomposition<Scalar> decomposition_from(const json& j, const NormSpec<Scalar>& domain);

/// {"hermitian": true, "matrix": [[...]]}; the tag is required.
template <class Scalar>
SelfAdjointMap<Scalar> hermitian_from(const json& j);

ConvexSet set_from(const json& j);

/// Numbers, with infinities spelled "inf" / "-inf".
json number(double x);

template <class Scalar>
json to_json(const Vec<Scalar>& v);

template <class Scalar>
json matrix_to_json(const Mat<Scalar>& m);

template <class Scalar>
json to_json(const NormSpec<Scalar>& norm);

template <class Scalar>
json to_json(const Functional<Scalar>& f);

template <class Scalar>
json to_json(const CertifiedValue<Scalar>& c);

template <class Scalar>
json to_json(const RankOneDecomposition<Scalar>& d);

json to_json(const Hyperplane& h);

}  // namespace normkit::io
