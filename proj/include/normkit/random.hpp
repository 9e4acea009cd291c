#pragma once

#include <cstdint>
#include <random>

#include "normkit/core.hpp"

namespace normkit {

using Rng = std::mt19937_64;

template <class Scalar>
Scalar random_scalar(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  if constexpr (is_complex_v<Scalar>) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    return Scalar(re, im);
  } else {
    return gauss(rng);
  }
}

/// Standard Gaussian entries (independent real and imaginary parts).
template <class Scalar>
Vec<Scalar> random_vector(Eigen::Index n, Rng& rng) {
  Vec<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = random_scalar<Scalar>(rng);
  return v;
}

template <class Scalar>
Mat<Scalar> random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat<Scalar> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = random_scalar<Scalar>(rng);
  return m;
}

template <class Scalar>
Mat<Scalar> random_hermitian(Eigen::Index n, Rng& rng) {
  Mat<Scalar> b = random_matrix<Scalar>(n, n, rng);
  return Mat<Scalar>((b + b.adjoint()) / 2.0);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Random point on the unit sphere of the given norm (Gaussian direction,
/// then normalized). The zero vector is resampled.
template <class Scalar>
Vec<Scalar> random_unit(const NormSpec<Scalar>& norm, Eigen::Index n, Rng& rng) {
  for (;;) {
    Vec<Scalar> v = random_vector<Scalar>(n, rng);
    const double r = norm(v);
    if (r > 0.0) return v / r;
  }
}

}  // namespace normkit
