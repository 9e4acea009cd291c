#pragma once

// Norms, inner products and the classical inequalities relating them.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "normkit/core.hpp"
#include "normkit/random.hpp"

namespace normkit {

/// |v|_p, computed by factoring out max |v_j| first so large entries do not
/// overflow when raised to the p-th power.
template <class Derived>
double p_norm(const Eigen::MatrixBase<Derived>& v, Exponent p) {
  require(v.size() > 0, "p_norm of an empty vector");
  const double largest = v.cwiseAbs().maxCoeff();
  if (p.is_inf() || largest == 0.0) return largest;
  if (p.is(1.0)) return v.cwiseAbs().sum();
  if (p.is(2.0)) return largest * (v.cwiseAbs() / largest).norm();
  const double e = p.value();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) sum += std::pow(std::abs(v(j)) / largest, e);
  return largest * std::pow(sum, 1.0 / e);
}

template <class Derived>
double p_norm(const Eigen::MatrixBase<Derived>& v, double p) {
  return p_norm(v, Exponent(p));
}

/// <v, w> = w^* G v: linear in v, conjugate-linear in w. Accepts a p = 2
/// spec as the identity Gram matrix.
template <class Scalar>
Scalar inner_product(const Vec<Scalar>& v, const Vec<Scalar>& w, const NormSpec<Scalar>& spec) {
  require(v.size() == w.size(), "inner_product: dimension mismatch");
  if (spec.is_p(2.0)) return w.dot(v);
  require(spec.is_inner_product(), "inner_product needs an inner-product norm");
  require(spec.gram().rows() == v.size(), "inner_product: Gram matrix dimension mismatch");
  return w.dot(spec.gram() * v);
}

template <class Scalar>
Scalar inner_product(const Vec<Scalar>& v, const Vec<Scalar>& w) {
  require(v.size() == w.size(), "inner_product: dimension mismatch");
  return w.dot(v);  // Eigen's dot conjugates its left operand
}

/// Unconjugated bilinear pairing sum_j v_j w_j.
template <class DerivedA, class DerivedB>
typename DerivedA::Scalar pairing(const Eigen::MatrixBase<DerivedA>& v, const Eigen::MatrixBase<DerivedB>& w) {
  require(v.size() == w.size(), "pairing: dimension mismatch");
  return (v.array() * w.array()).sum();
}

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

inline InequalityCheck young_bound(double a, double b, double p, double q, double eps = 1e-9) {
  require(a >= 0.0 && b >= 0.0, "young_bound: a and b must be nonnegative");
  require(p > 1.0 && q > 1.0 && std::isfinite(p) && std::isfinite(q), "young_bound: need 1 < p, q < inf");
  require(std::abs(1.0 / p + 1.0 / q - 1.0) <= eps, "young_bound: p and q are not conjugate exponents");
  InequalityCheck r;
  r.lhs = a * b;
  r.rhs = std::pow(a, p) / p + std::pow(b, q) / q;
  r.holds = r.lhs <= r.rhs + eps * std::max(1.0, r.rhs);
  return r;
}

/// |sum v_j w_j| <= |v|_p |w|_q.
template <class Scalar>
InequalityCheck holder_check(const Vec<Scalar>& v, const Vec<Scalar>& w, Exponent p, double eps = 1e-9) {
  require(v.size() == w.size(), "holder_check: dimension mismatch");
  InequalityCheck r;
  r.lhs = std::abs(pairing(v, w));
  r.rhs = p_norm(v, p) * p_norm(w, conjugate_exponent(p));
  r.holds = r.lhs <= r.rhs + eps * r.rhs;
  return r;
}

template <class Scalar>
InequalityCheck minkowski_check(const Vec<Scalar>& v, const Vec<Scalar>& w, Exponent p, double eps = 1e-9) {
  require(v.size() == w.size(), "minkowski_check: dimension mismatch");
  InequalityCheck r;
  r.lhs = p_norm(v + w, p);
  r.rhs = p_norm(v, p) + p_norm(w, p);
  r.holds = r.lhs <= r.rhs + eps * r.rhs;
  return r;
}

/// |<v, w>| <= |v|_2 |w|_2 with the Hermitian inner product.
template <class Scalar>
InequalityCheck cauchy_schwarz_check(const Vec<Scalar>& v, const Vec<Scalar>& w, double eps = 1e-9) {
  InequalityCheck r;
  r.lhs = std::abs(inner_product(v, w));
  r.rhs = v.norm() * w.norm();
  r.holds = r.lhs <= r.rhs + eps * std::max(1.0, r.rhs);
  return r;
}

/// | |v| - |w| | <= |v - w| for any norm.
template <class Scalar>
InequalityCheck reverse_triangle_check(const Vec<Scalar>& v, const Vec<Scalar>& w, const NormSpec<Scalar>& norm,
                                       double eps = 1e-9) {
  InequalityCheck r;
  r.lhs = std::abs(norm(v) - norm(w));
  r.rhs = norm(Vec<Scalar>(v - w));
  r.holds = r.lhs <= r.rhs + eps * std::max({1.0, norm(v), norm(w)});
  return r;
}

struct NormComparison {
  double low = 0.0;    // |v|_q
  double value = 0.0;  // |v|_p
  double high = 0.0;   // n^{1/p - 1/q} |v|_q
  bool holds = false;
};

/// For p <= q: |v|_q <= |v|_p <= n^{1/p - 1/q} |v|_q.
template <class Scalar>
NormComparison norm_comparison(const Vec<Scalar>& v, Exponent p, Exponent q, double eps = 1e-9) {
  require(p <= q, "norm_comparison: need p <= q");
  NormComparison r;
  r.low = p_norm(v, q);
  r.value = p_norm(v, p);
  r.high = std::pow(static_cast<double>(v.size()), p.reciprocal() - q.reciprocal()) * r.low;
  const double slack = eps * std::max(1.0, r.high);
  r.holds = r.low <= r.value + slack && r.value <= r.high + slack;
  return r;
}

template <class Scalar>
struct ConvexityWitness {
  Vec<Scalar> u;
  Vec<Scalar> v;
  double t = 0.0;
  double norm_value = 0.0;  // norm(t u + (1 - t) v), exceeds 1
};

template <class Scalar>
struct ConvexityReport {
  bool convex = true;
  int trials = 0;
  std::optional<ConvexityWitness<Scalar>> witness;
};

/// Samples pairs on the unit sphere of `norm` and checks that every convex
/// combination stays in the closed unit ball. Pairs of distinct basis
/// vectors at t = 1/2 are tried first, then random pairs.
template <class Scalar>
ConvexityReport<Scalar> check_ball_convexity(const NormSpec<Scalar>& norm, Eigen::Index n, int trials,
                                             std::uint64_t seed, double eps = 1e-9) {
  require(n >= 1, "check_ball_convexity: dimension must be positive");
  ConvexityReport<Scalar> report;
  auto probe = [&](const Vec<Scalar>& u, const Vec<Scalar>& v, double t) {
    ++report.trials;
    const Vec<Scalar> mix = t * u + (1.0 - t) * v;
    const double value = norm(mix);
    if (value > 1.0 + eps) {
      report.convex = false;
      report.witness = ConvexityWitness<Scalar>{u, v, t, value};
      return false;
    }
    return true;
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Vec<Scalar> u = Vec<Scalar>::Unit(n, i);
      Vec<Scalar> v = Vec<Scalar>::Unit(n, j);
      u /= norm(u);
      v /= norm(v);
      if (!probe(u, v, 0.5)) return report;
    }
  }
  Rng rng(seed);
  for (int k = 0; k < trials; ++k) {
    const Vec<Scalar> u = random_unit(norm, n, rng);
    const Vec<Scalar> v = random_unit(norm, n, rng);
    if (!probe(u, v, uniform01(rng))) return report;
  }
  return report;
}

struct EquivalenceEstimate {
  double c_low = 0.0;
  double c_high = 0.0;
  /// Always true: sampled extremes are inner estimates of the true constants.
  bool inner_estimate = true;
};

/// Empirical min and max of norm(v) / |v|_2 over sampled Euclidean unit
/// vectors (basis vectors, the normalized all-ones vector, then random).
template <class Scalar>
EquivalenceEstimate equivalence_constants(const NormSpec<Scalar>& norm, Eigen::Index n, int trials,
                                          std::uint64_t seed) {
  require(n >= 1, "equivalence_constants: dimension must be positive");
  EquivalenceEstimate est;
  est.c_low = std::numeric_limits<double>::infinity();
  est.c_high = 0.0;
  auto take = [&](const Vec<Scalar>& u) {
    const double r = norm(Vec<Scalar>(u / u.norm()));
    est.c_low = std::min(est.c_low, r);
    est.c_high = std::max(est.c_high, r);
  };
  for (Eigen::Index i = 0; i < n; ++i) take(Vec<Scalar>::Unit(n, i));
  take(Vec<Scalar>::Ones(n));
  Rng rng(seed);
  for (int k = 0; k < trials; ++k) {
    Vec<Scalar> u = random_vector<Scalar>(n, rng);
    if (u.norm() > 0.0) take(u);
  }
  return est;
}

}  // namespace normkit
