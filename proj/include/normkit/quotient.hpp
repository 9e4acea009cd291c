#pragma once

// Quotient norms |x + W| and norm-preserving extension of functionals.

#include <cstdint>
#include <vector>

#include "normkit/core.hpp"
#include "normkit/duality.hpp"

namespace normkit {

/// A linear subspace of Scalar^n given by linearly independent columns.
/// The zero subspace has an n x 0 basis.
template <class Scalar>
class Subspace {
 public:
  /// Rejects dependent columns (full-pivot elimination, threshold eps).
  explicit Subspace(Mat<Scalar> basis, double eps = 1e-9);
  static Subspace zero(Eigen::Index ambient) { return Subspace(Mat<Scalar>(ambient, 0)); }
  static Subspace span(const std::vector<Vec<Scalar>>& vectors, Eigen::Index ambient, double eps = 1e-9);

  const Mat<Scalar>& basis() const { return basis_; }
  Eigen::Index ambient_dimension() const { return basis_.rows(); }
  Eigen::Index dimension() const { return basis_.cols(); }

 private:
  Mat<Scalar> basis_;
};

/// inf over w in W of |x + w|. The witness is the minimizing representative
/// x + w.
///
/// Exact for inner-product norms (least squares in the whitened metric) and
/// for real l1 / l_inf (vertex enumeration when dim W <= 2, the dual linear
/// program otherwise). Other norms get an interval: a quasi-Newton descent
/// followed by compass search bounds it from above, and the norming
/// functional of the best representative, projected onto the annihilator of
/// W, bounds it from below.
template <class Scalar>
CertifiedValue<Scalar> quotient_norm(const Vec<Scalar>& x, const Subspace<Scalar>& w, const NormSpec<Scalar>& norm,
                                     const Tolerances& tol = {});

/// Norm of lambda on Z, where lambda(z_i) = values_i on Z's basis:
/// 1 / dist(z0, ker lambda) for any z0 in Z with lambda(z0) = 1.
template <class Scalar>
CertifiedValue<Scalar> subspace_functional_norm(const Subspace<Scalar>& z, const Vec<Scalar>& values,
                                                const NormSpec<Scalar>& norm, const Tolerances& tol = {});

template <class Scalar>
struct Extension {
  Functional<Scalar> functional;
  CertifiedValue<Scalar> norm_on_subspace;
  double dual_norm = 0.0;
  bool exact = false;  // dual_norm matches norm_on_subspace to eps_exact
};

/// Extends lambda from Z to the whole space without increasing its norm:
/// pass to the quotient by ker lambda, where lambda has a norming
/// functional, and pull that back. Real l1 / l_inf solve the dual linear
/// program for an annihilating functional of maximal pairing directly.
/// Custom norms are rejected; lambda = 0 gives the zero functional.
template <class Scalar>
Extension<Scalar> extend_functional(const Subspace<Scalar>& z, const Vec<Scalar>& values,
                                    const NormSpec<Scalar>& norm, const Tolerances& tol = {});

struct QuotientMapReport {
  int homogeneity_failures = 0;
  int triangle_failures = 0;
  int zero_failures = 0;
  bool holds = true;
};

/// Samples coset representatives and checks that |x + W| is a norm on V/W.
template <class Scalar>
QuotientMapReport quotient_map_check(const Subspace<Scalar>& w, const NormSpec<Scalar>& norm, int trials,
                                     std::uint64_t seed, const Tolerances& tol = {});

}  // namespace normkit
