#pragma once

// Trace (nuclear) norms: the infimum of sum_j |lambda_j|_* |w_j| over
// decompositions T = sum_j w_j lambda_j.

#include <cstdint>
#include <optional>
#include <vector>

#include "normkit/duality.hpp"
#include "normkit/opnorm.hpp"

namespace normkit {

template <class Scalar>
struct RankOneTerm {
  Functional<Scalar> lambda;
  Vec<Scalar> w;
};

/// T(v) = sum_j lambda_j(v) w_j.
template <class Scalar>
struct RankOneDecomposition {
  std::vector<RankOneTerm<Scalar>> terms;
};

/// sum_j w_j lambda_j^T; `rows` and `cols` size the zero map.
template <class Scalar>
Mat<Scalar> reconstruct(const RankOneDecomposition<Scalar>& d, Eigen::Index rows, Eigen::Index cols);

/// Sum of |lambda_j|_* |w_j| with lambda_j measured against `domain_norm`.
/// Terms with a zero factor are dropped.
template <class Scalar>
double decomposition_cost(const RankOneDecomposition<Scalar>& d, const NormSpec<Scalar>& domain_norm,
                          const NormSpec<Scalar>& codomain_norm, const Tolerances& tol = {});

/// Same, after checking that the decomposition reproduces T (eps_exact,
/// relative to |T|).
template <class Scalar>
double decomposition_cost(const LinearMap<Scalar>& t, const RankOneDecomposition<Scalar>& d,
                          const Tolerances& tol = {});

template <class Scalar>
struct TraceNorm {
  CertifiedValue<Scalar> value;
  RankOneDecomposition<Scalar> decomposition;  // attains value.upper
  std::optional<Mat<Scalar>> probe;            // A with |tr(A T)| / |A|_op = value.lower
};

/// Exact for l2 -> l2 (and inner-product norms): sum of singular values from
/// the Jacobi solver on T^* T, with the singular-vector decomposition as
/// witness. Otherwise an interval: the upper end is the cheapest of the
/// column, row and singular-vector decompositions re-costed in the given
/// norms; the lower end is the best |tr(A T)| / |A|_op over probe maps A.
template <class Scalar>
TraceNorm<Scalar> trace_norm(const LinearMap<Scalar>& t, const Tolerances& tol = {}, std::uint64_t seed = 0);

/// tr(A T) for A : W -> V and T : V -> W.
template <class Scalar>
Scalar trace_of_composition(const Mat<Scalar>& a, const Mat<Scalar>& t);

struct PairingBound {
  double lhs = 0.0;  // |tr(A T)|
  double rhs = 0.0;  // |A|_op (upper) * |T|_tr (upper)
  bool holds = false;
};

/// |tr(A T)| <= |A|_{op, W V} |T|_{tr, V W}. A's domain must equal T's
/// codomain and vice versa.
template <class Scalar>
PairingBound pairing_bound_check(const LinearMap<Scalar>& a, const LinearMap<Scalar>& t, const Tolerances& tol = {},
                                 std::uint64_t seed = 0);

/// |T|_op <= |T|_tr, checked as opnorm.lower <= tracenorm.upper + eps_iter.
template <class Scalar>
bool op_le_trace_check(const LinearMap<Scalar>& t, const Tolerances& tol = {}, std::uint64_t seed = 0);

}  // namespace normkit
