#pragma once

// Linear functionals, dual norms and norming functionals.

#include <cstdint>

#include "normkit/core.hpp"

namespace normkit {

/// lambda_w(v) = sum_j v_j w_j, paired with the norm of the space it acts on.
/// The pairing is unconjugated in both real and complex mode.
template <class Scalar>
struct Functional {
  Vec<Scalar> weights;
  NormSpec<Scalar> space_norm = NormSpec<Scalar>::p(2.0);
};

template <class Scalar>
Scalar evaluate(const Functional<Scalar>& f, const Vec<Scalar>& v);

/// sup { |f(v)| : |v| <= 1 }. Exact for p-norms and inner-product norms,
/// where the witness is a unit vector attaining the supremum. For custom
/// norms the value is a lower estimate from randomized ascent and the upper
/// end is +inf.
template <class Scalar>
CertifiedValue<Scalar> dual_norm(const Functional<Scalar>& f, const Tolerances& tol = {}, std::uint64_t seed = 0);

/// Vector u with |u| = 1 and sum_j w_j u_j = |w|_* (exists for p-norms and
/// inner-product norms).
template <class Scalar>
Vec<Scalar> attaining_vector(const Vec<Scalar>& w, const NormSpec<Scalar>& space_norm);

/// Functional of dual norm 1 with f(v) = |v|. At p = inf the smallest
/// max-modulus index is used; at p = 1 weights on zero entries are 0.
template <class Scalar>
Functional<Scalar> norming_functional(const Vec<Scalar>& v, const NormSpec<Scalar>& space_norm);

/// Real-linear functional on C^n, stored through coordinates
/// x = (Re v_1, ..., Re v_n, Im v_1, ..., Im v_n) as r(x) = c^T x.
struct RealLinearFunctional {
  Eigen::VectorXd coefficients;
};

Eigen::VectorXd to_real_coordinates(const Vec<Complex>& v);
Vec<Complex> from_real_coordinates(const Eigen::VectorXd& x);

/// r(v) = Re f(v).
RealLinearFunctional real_part_functional(const Functional<Complex>& f);
double evaluate(const RealLinearFunctional& r, const Vec<Complex>& v);

/// The unique complex-linear f with Re f = r: f(v) = r(v) - i r(i v).
Functional<Complex> complexify(const RealLinearFunctional& r, const NormSpec<Complex>& space_norm);

/// The norm of C^n read as a norm on R^{2n}.
NormSpec<double> realified_norm(const NormSpec<Complex>& norm);

}  // namespace normkit
