#pragma once

// Functions on a finite set E = {0, ..., m-1} with values in a normed space.

#include <cstdint>

#include "normkit/core.hpp"
#include "normkit/opnorm.hpp"

namespace normkit {

/// Column x of `values` is f(x); all values share `value_norm`.
template <class Scalar>
struct VectorField {
  Mat<Scalar> values;
  NormSpec<Scalar> value_norm = NormSpec<Scalar>::p(2.0);

  Eigen::Index points() const { return values.cols(); }
  Eigen::Index value_dimension() const { return values.rows(); }
};

/// (sum_x |f(x)|^p)^(1/p), or max_x |f(x)| at p = inf.
template <class Scalar>
double mixed_norm(const VectorField<Scalar>& f, Exponent p);

/// (T f)(x) = sum_y T_xy f(y).
template <class Scalar>
VectorField<Scalar> lift_operator(const Mat<Scalar>& t, const VectorField<Scalar>& f);

template <class Scalar>
struct LiftReport {
  CertifiedValue<Scalar> scalar_opnorm;  // T on (Scalar^m, l_p)
  double max_ratio = 0.0;                // over sampled fields, embedding included
  double embedded_ratio = 0.0;           // scalar witness placed in value component 0
  bool holds = false;
};

/// Samples |T f|_{p,V} / |f|_{p,V} over random fields with n-dimensional
/// values, V = l_p^n (or l_2^n when `euclidean_values`), and compares with
/// the scalar operator norm: the ratio must never exceed it and the
/// one-component embedding of the scalar witness must reach it.
template <class Scalar>
LiftReport<Scalar> lifted_norm_check(const Mat<Scalar>& t, Exponent p, Eigen::Index n, int trials, std::uint64_t seed,
                                     bool euclidean_values = false, const Tolerances& tol = {});

}  // namespace normkit
