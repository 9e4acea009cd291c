#pragma once

// Small dense kernels shared by the geometry and norm modules.

#include <cstdint>

#include "normkit/core.hpp"

namespace normkit {

template <class Scalar>
struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  Mat<Scalar> vectors;     // orthonormal columns matching `values`
  int sweeps = 0;
  bool converged = false;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Stops once the
/// off-diagonal Frobenius mass drops below tol * |A|_F.
template <class Scalar>
HermitianEigen<Scalar> jacobi_eigen(const Mat<Scalar>& a, double tol = 1e-14, int max_sweeps = 100);

template <class Scalar>
struct PowerIteration {
  double sigma = 0.0;      // |T x| for the final unit x
  Vec<Scalar> vector;      // unit right singular vector estimate
  double residual = 0.0;   // |T^*T x - sigma^2 x|
  int iterations = 0;
  bool certified = false;  // residual <= certify_tol * sigma^2
};

/// Power iteration on T^* T for the largest singular value of T.
template <class Scalar>
PowerIteration<Scalar> power_iteration(const Mat<Scalar>& t, std::uint64_t seed, double certify_tol, int max_iter);

struct NnlsResult {
  Eigen::VectorXd coefficients;
  int iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min |A c - b|_2 subject to c >= 0.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter);

struct LinearProgram {
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

/// Maximizes c^T x subject to A x = b, x >= 0 with a two-phase dense
/// simplex method and Bland's anti-cycling rule.
LinearProgram simplex_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                               int max_iter = 10000);

/// Largest singular value of a matrix via the Jacobi solver on T^* T.
template <class Scalar>
double jacobi_spectral_norm(const Mat<Scalar>& t);

/// Singular values (descending) and right singular vectors of T via the
/// Jacobi solver on T^* T. Singular values are recomputed as |T v_i|.
template <class Scalar>
struct SingularSystem {
  Eigen::VectorXd values;
  Mat<Scalar> right;  // columns v_i
  Mat<Scalar> left;   // columns u_i = T v_i / sigma_i (zero when sigma_i == 0)
};

template <class Scalar>
SingularSystem<Scalar> singular_system(const Mat<Scalar>& t);

}  // namespace normkit
