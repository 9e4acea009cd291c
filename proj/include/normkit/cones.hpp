#pragma once

// Dual cones: the nonnegative orthant, finitely generated cones, and the
// cone of positive semidefinite self-adjoint maps under the trace pairing.

#include <cstdint>
#include <optional>

#include "normkit/convexgeo.hpp"
#include "normkit/core.hpp"

namespace normkit {

/// Hermitian matrix (self-adjoint for the standard inner product). The
/// stored matrix is the exact Hermitian part of the input.
template <class Scalar>
class SelfAdjointMap {
 public:
  explicit SelfAdjointMap(const Mat<Scalar>& m, double eps = 1e-9);
  const Mat<Scalar>& matrix() const { return matrix_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

 private:
  Mat<Scalar> matrix_;
};

/// Marker for the cone of positive semidefinite maps on Scalar^n.
struct PsdCone {
  Eigen::Index dimension = 0;
};

/// lambda_w >= 0 on the primal cone. Orthant: w >= 0 entrywise. Generated
/// cone: <w, g> >= 0 for every generator. Both up to eps_exact (relative).
bool dual_cone_membership(const ConvexSet& primal, const Vector& w, const Tolerances& tol = {});

/// The PSD cone is self-dual under the trace pairing: T is in the dual cone
/// iff T is PSD.
template <class Scalar>
bool dual_cone_membership(const PsdCone& primal, const SelfAdjointMap<Scalar>& t, const Tolerances& tol = {});

/// trace(A T), real for Hermitian inputs.
template <class Scalar>
double trace_pairing(const SelfAdjointMap<Scalar>& t, const SelfAdjointMap<Scalar>& a);

template <class Scalar>
struct PsdTest {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  double spectral_radius = 0.0;
  double threshold = 0.0;  // min eigenvalue must be >= -threshold
  Vec<Scalar> min_eigenvector;
};

/// Eigenvalue test via cyclic Jacobi: min eigenvalue >= -eps_iter (1 + rho).
template <class Scalar>
PsdTest<Scalar> psd_test(const SelfAdjointMap<Scalar>& t, const Tolerances& tol = {});

template <class Scalar>
struct PsdDuality {
  bool is_psd = false;
  bool pairing_nonneg = false;
  double min_pairing = 0.0;  // smallest trace(A T) / trace(A) over probes
  std::optional<Mat<Scalar>> witness;  // rank-one u u^* with trace(u u^* T) < 0
  double witness_pairing = 0.0;
};

/// Compares the eigenvalue test with the trace-pairing test over random PSD
/// probes B B^* together with the eigenvector projectors of T.
template <class Scalar>
PsdDuality<Scalar> psd_duality_check(const SelfAdjointMap<Scalar>& t, int trials, std::uint64_t seed,
                                     const Tolerances& tol = {});

/// For z outside the cone, a dual-cone element v with <v, z> < 0.
std::optional<Vector> bidual_separator(const ConvexSet& cone, const Vector& z, const Tolerances& tol = {});

struct BidualReport {
  bool holds = true;
  int members = 0;
  int non_members = 0;
  int failures = 0;
};

/// Checks that the cone equals its bidual on sampled points: members pair
/// nonnegatively with sampled dual elements, non-members get a separator.
BidualReport bidual_check(const ConvexSet& cone, int samples, std::uint64_t seed, const Tolerances& tol = {});

}  // namespace normkit
