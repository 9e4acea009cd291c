#include "normkit/vecfun.hpp"

#include <algorithm>

#include "normkit/random.hpp"
#include "normkit/spaces.hpp"

namespace normkit {

template <class Scalar>
double mixed_norm(const VectorField<Scalar>& f, Exponent p) {
  require(f.points() > 0, "mixed_norm: the field has no points");
  Eigen::VectorXd pointwise(f.points());
  for (Eigen::Index x = 0; x < f.points(); ++x) pointwise(x) = f.value_norm(Vec<Scalar>(f.values.col(x)));
  return p_norm(pointwise, p);
}

template <class Scalar>
VectorField<Scalar> lift_operator(const Mat<Scalar>& t, const VectorField<Scalar>& f) {
  require(t.rows() == t.cols() && t.cols() == f.points(), "lift_operator: T must be square of size |E|");
  return VectorField<Scalar>{Mat<Scalar>(f.values * t.transpose()), f.value_norm};
}

template <class Scalar>
LiftReport<Scalar> lifted_norm_check(const Mat<Scalar>& t, Exponent p, Eigen::Index n, int trials, std::uint64_t seed,
                                     bool euclidean_values, const Tolerances& tol) {
  require(t.rows() == t.cols() && t.rows() > 0, "lifted_norm_check: T must be square and nonempty");
  require(n >= 1, "lifted_norm_check: value dimension must be positive");
  const Eigen::Index m = t.rows();
  const NormSpec<Scalar> value_norm = euclidean_values ? NormSpec<Scalar>::p(2.0) : NormSpec<Scalar>::p(p);

  LiftReport<Scalar> out;
  const NormSpec<Scalar> outer = NormSpec<Scalar>::p(p);
  out.scalar_opnorm = operator_norm(LinearMap<Scalar>{t, outer, outer}, tol, seed);

  auto ratio = [&](const Mat<Scalar>& values) {
    const VectorField<Scalar> f{values, value_norm};
    const double denom = mixed_norm(f, p);
    return denom > 0.0 ? mixed_norm(lift_operator(t, f), p) / denom : 0.0;
  };

  if (out.scalar_opnorm.witness) {
    Mat<Scalar> values = Mat<Scalar>::Zero(n, m);
    values.row(0) = out.scalar_opnorm.witness->transpose();
    out.embedded_ratio = ratio(values);
  }
  out.max_ratio = out.embedded_ratio;

  Rng rng(seed);
  for (int k = 0; k < trials; ++k) {
    Mat<Scalar> values = random_matrix<Scalar>(n, m, rng);
    if (k % 3 == 1) {
      // sparse supports stress the l1 and l_inf cases
      for (Eigen::Index x = 0; x < m; ++x)
        if (uniform01(rng) < 0.5) values.col(x).setZero();
    } else if (k % 3 == 2) {
      values = random_vector<Scalar>(n, rng) * random_vector<Scalar>(m, rng).transpose();
    }
    out.max_ratio = std::max(out.max_ratio, ratio(values));
  }

  const bool bounded = out.max_ratio <= out.scalar_opnorm.upper + tol.eps_iter;
  const bool attained = out.embedded_ratio >= out.scalar_opnorm.lower - tol.eps_iter;
  out.holds = bounded && attained;
  return out;
}

#define NORMKIT_INSTANTIATE(S)                                                                                  \
  template double mixed_norm<S>(const VectorField<S>&, Exponent);                                               \
  template VectorField<S> lift_operator<S>(const Mat<S>&, const VectorField<S>&);                               \
  template LiftReport<S> lifted_norm_check<S>(const Mat<S>&, Exponent, Eigen::Index, int, std::uint64_t, bool,  \
                                              const Tolerances&);

NORMKIT_INSTANTIATE(double)
NORMKIT_INSTANTIATE(Complex)
#undef NORMKIT_INSTANTIATE

}  // namespace normkit
