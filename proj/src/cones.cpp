#include "normkit/cones.hpp"

#include <algorithm>
#include <cmath>

#include "normkit/linalg.hpp"
#include "normkit/random.hpp"

namespace normkit {

template <class Scalar>
SelfAdjointMap<Scalar>::SelfAdjointMap(const Mat<Scalar>& m, double eps) {
  require(m.rows() > 0 && m.rows() == m.cols(), "self-adjoint map: matrix must be square and nonempty");
  require((m - m.adjoint()).norm() <= eps * std::max(1.0, m.norm()), "self-adjoint map: matrix is not Hermitian");
  matrix_ = (m + m.adjoint()) / 2.0;
}

bool dual_cone_membership(const ConvexSet& primal, const Vector& w, const Tolerances& tol) {
  require(primal.is_cone(), "dual_cone_membership: primal must be an orthant or a generated cone");
  require(w.size() == primal.dimension(), "dual_cone_membership: dimension mismatch");
  if (const auto* gen = std::get_if<sets::GeneratedCone>(&primal.variant())) {
    for (Eigen::Index j = 0; j < gen->generators.cols(); ++j) {
      const auto g = gen->generators.col(j);
      if (w.dot(g) < -tol.eps_exact * std::max(1.0, w.norm() * g.norm())) return false;
    }
    return true;
  }
  return (w.array() >= -tol.eps_exact).all();
}

template <class Scalar>
PsdTest<Scalar> psd_test(const SelfAdjointMap<Scalar>& t, const Tolerances& tol) {
  const HermitianEigen<Scalar> eig = jacobi_eigen<Scalar>(t.matrix());
  PsdTest<Scalar> out;
  out.min_eigenvalue = eig.values(0);
  out.spectral_radius = eig.values.cwiseAbs().maxCoeff();
  out.threshold = tol.eps_iter * (1.0 + out.spectral_radius);
  out.is_psd = out.min_eigenvalue >= -out.threshold;
  out.min_eigenvector = eig.vectors.col(0);
  return out;
}

template <class Scalar>
bool dual_cone_membership(const PsdCone& primal, const SelfAdjointMap<Scalar>& t, const Tolerances& tol) {
  require(t.dimension() == primal.dimension, "dual_cone_membership: dimension mismatch");
  return psd_test(t, tol).is_psd;
}

template <class Scalar>
double trace_pairing(const SelfAdjointMap<Scalar>& t, const SelfAdjointMap<Scalar>& a) {
  require(t.dimension() == a.dimension(), "trace_pairing: dimension mismatch");
  // trace(A T) = sum_{jk} A_jk T_kj
  return Eigen::numext::real((a.matrix().array() * t.matrix().transpose().array()).sum());
}

template <class Scalar>
PsdDuality<Scalar> psd_duality_check(const SelfAdjointMap<Scalar>& t, int trials, std::uint64_t seed,
                                     const Tolerances& tol) {
  const Eigen::Index n = t.dimension();
  const PsdTest<Scalar> test = psd_test(t, tol);
  const HermitianEigen<Scalar> eig = jacobi_eigen<Scalar>(t.matrix());

  PsdDuality<Scalar> out;
  out.is_psd = test.is_psd;
  out.min_pairing = std::numeric_limits<double>::infinity();
  std::optional<Mat<Scalar>> most_negative;

  auto probe = [&](const Mat<Scalar>& a) {
    const double weight = Eigen::numext::real(a.trace());
    if (weight <= 0.0) return;
    const double value = trace_pairing(t, SelfAdjointMap<Scalar>(a)) / weight;
    if (value < out.min_pairing) {
      out.min_pairing = value;
      most_negative = a / weight;
    }
  };

  Rng rng(seed);
  for (int k = 0; k < trials; ++k) {
    const Mat<Scalar> b = random_matrix<Scalar>(n, n, rng);
    probe(Mat<Scalar>(b * b.adjoint()));
  }
  // Rank-one projectors onto the eigenvectors of T: these decide the
  // question exactly because T is diagonal in that basis.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vec<Scalar> u = eig.vectors.col(k);
    probe(Mat<Scalar>(u * u.adjoint()));
  }
  out.pairing_nonneg = out.min_pairing >= -test.threshold;
  if (!out.pairing_nonneg) {
    const Vec<Scalar> u = eig.vectors.col(0);
    const Mat<Scalar> witness = u * u.adjoint();
    out.witness = witness;
    out.witness_pairing = trace_pairing(t, SelfAdjointMap<Scalar>(witness));
  }
  return out;
}

std::optional<Vector> bidual_separator(const ConvexSet& cone, const Vector& z, const Tolerances& tol) {
  require(cone.is_cone(), "bidual_separator: set must be an orthant or a generated cone");
  if (contains(cone, z, tol)) return std::nullopt;
  return separate_cone(cone, z, tol).normal;
}

BidualReport bidual_check(const ConvexSet& cone, int samples, std::uint64_t seed, const Tolerances& tol) {
  require(cone.is_cone(), "bidual_check: set must be an orthant or a generated cone");
  const Eigen::Index n = cone.dimension();
  Rng rng(seed);
  const auto* gen = std::get_if<sets::GeneratedCone>(&cone.variant());

  std::vector<Vector> duals;
  for (int k = 0; k < 32; ++k) {
    const Vector y = random_vector<double>(n, rng);
    // Moreau: the projection onto the dual cone is y + P_K(-y).
    if (gen) duals.push_back(y + project(cone, Vector(-y), tol).point);
    else duals.push_back(y.cwiseAbs());
  }

  std::vector<Vector> points;
  for (int k = 0; k < samples; ++k) {
    if (k % 2 == 0) {
      points.push_back(random_vector<double>(n, rng));
    } else if (gen) {
      const Eigen::VectorXd c = random_vector<double>(gen->generators.cols(), rng).cwiseAbs();
      points.push_back(gen->generators * c);
    } else {
      points.push_back(random_vector<double>(n, rng).cwiseAbs());
    }
  }

  BidualReport out;
  for (const Vector& z : points) {
    const std::optional<Vector> separator = bidual_separator(cone, z, tol);
    bool ok = true;
    if (!separator) {
      ++out.members;
      for (const Vector& w : duals) ok = ok && w.dot(z) >= -tol.eps_iter * std::max(1.0, w.norm() * z.norm());
    } else {
      ++out.non_members;
      const Vector& v = *separator;
      bool in_dual = true;
      if (gen) {
        for (Eigen::Index j = 0; j < gen->generators.cols(); ++j)
          in_dual = in_dual && v.dot(gen->generators.col(j)) >= -tol.eps_iter * gen->generators.col(j).norm();
      } else {
        in_dual = (v.array() >= -tol.eps_iter).all();
      }
      ok = in_dual && v.dot(z) < 0.0;
    }
    if (!ok) {
      ++out.failures;
      out.holds = false;
    }
  }
  return out;
}

template class SelfAdjointMap<double>;
template class SelfAdjointMap<Complex>;
template bool dual_cone_membership<double>(const PsdCone&, const SelfAdjointMap<double>&, const Tolerances&);
template bool dual_cone_membership<Complex>(const PsdCone&, const SelfAdjointMap<Complex>&, const Tolerances&);
template double trace_pairing<double>(const SelfAdjointMap<double>&, const SelfAdjointMap<double>&);
template double trace_pairing<Complex>(const SelfAdjointMap<Complex>&, const SelfAdjointMap<Complex>&);
template PsdTest<double> psd_test<double>(const SelfAdjointMap<double>&, const Tolerances&);
template PsdTest<Complex> psd_test<Complex>(const SelfAdjointMap<Complex>&, const Tolerances&);
template PsdDuality<double> psd_duality_check<double>(const SelfAdjointMap<double>&, int, std::uint64_t,
                                                      const Tolerances&);
template PsdDuality<Complex> psd_duality_check<Complex>(const SelfAdjointMap<Complex>&, int, std::uint64_t,
                                                        const Tolerances&);

}  // namespace normkit
