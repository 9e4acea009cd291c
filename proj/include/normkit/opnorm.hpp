#pragma once

// Operator norms of linear maps between finite-dimensional normed spaces.

#include <cstdint>

#include "normkit/core.hpp"
#include "normkit/duality.hpp"

namespace normkit {

/// T : (Scalar^n_in, domain) -> (Scalar^n_out, codomain) in standard bases.
template <class Scalar>
struct LinearMap {
  Mat<Scalar> matrix;
  NormSpec<Scalar> domain = NormSpec<Scalar>::p(2.0);
  NormSpec<Scalar> codomain = NormSpec<Scalar>::p(2.0);

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
};

template <class Scalar>
void validate(const LinearMap<Scalar>& t);

/// sup { |T v|_W : |v|_V <= 1 }.
///
/// Exact rules, tried in order:
///  - domain l1: max over columns of the codomain norm;
///  - codomain l_inf: max over rows of the dual norm of the row functional;
///  - both norms from inner products: largest singular value of the
///    whitened matrix by power iteration (exact once the Rayleigh residual
///    certifies it);
///  - real l_inf -> l1 with at most 20 columns: enumeration of sign vectors.
/// Otherwise a generalized power iteration (alternating norming functionals)
/// with 16 restarts gives the lower end, and the upper end is the smallest
/// rigorous bound obtained from the exact rules and norm comparisons.
/// The witness is a unit vector of the domain achieving the lower end.
template <class Scalar>
CertifiedValue<Scalar> operator_norm(const LinearMap<Scalar>& t, const Tolerances& tol = {}, std::uint64_t seed = 0);

/// Column rule (domain l1).
template <class Scalar>
CertifiedValue<Scalar> column_rule(const LinearMap<Scalar>& t);

/// Row rule (codomain l_inf).
template <class Scalar>
CertifiedValue<Scalar> row_rule(const LinearMap<Scalar>& t, const Tolerances& tol = {});

/// T^* : W^* -> V^*, the unconjugated transpose with dual norms swapped.
template <class Scalar>
LinearMap<Scalar> adjoint(const LinearMap<Scalar>& t);

template <class Scalar>
struct AdjointCheck {
  CertifiedValue<Scalar> primal;
  CertifiedValue<Scalar> dual;
  bool consistent = false;  // intervals overlap within eps_iter
};

template <class Scalar>
AdjointCheck<Scalar> adjoint_norm_check(const LinearMap<Scalar>& t, const Tolerances& tol = {},
                                        std::uint64_t seed = 0);

/// Matrix of v -> lambda(v) w.
template <class Scalar>
Mat<Scalar> rank_one_matrix(const Vec<Scalar>& lambda_weights, const Vec<Scalar>& w) {
  return w * lambda_weights.transpose();
}

/// |lambda|_* |w|_W, the operator norm of v -> lambda(v) w.
template <class Scalar>
double rank_one_norm(const Functional<Scalar>& lambda, const Vec<Scalar>& w, const NormSpec<Scalar>& codomain_norm,
                     const Tolerances& tol = {});

}  // namespace normkit
