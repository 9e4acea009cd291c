#include "normkit/opnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normkit/linalg.hpp"
#include "normkit/random.hpp"
#include "normkit/spaces.hpp"

namespace normkit {

namespace {

constexpr int kRestarts = 16;
constexpr int kMaxSignColumns = 20;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// R with |v| = |R v|_2 for a Euclidean-like norm.
template <class Scalar>
Mat<Scalar> euclidean_factor(const NormSpec<Scalar>& norm, Eigen::Index n) {
  if (norm.is_inner_product()) return norm.cholesky_upper();
  return Mat<Scalar>::Identity(n, n);
}

/// sup |v|_2 / |v| over nonzero v.
template <class Scalar>
double l2_over_norm(const NormSpec<Scalar>& norm, Eigen::Index n) {
  if (norm.is_inner_product()) return 1.0 / std::sqrt(norm.gram_min_eigenvalue());
  if (norm.is_p()) return std::max(1.0, std::pow(double(n), 0.5 - norm.exponent().reciprocal()));
  return kInf;
}

/// sup |y| / |y|_2 over nonzero y.
template <class Scalar>
double norm_over_l2(const NormSpec<Scalar>& norm, Eigen::Index m) {
  if (norm.is_inner_product()) return std::sqrt(norm.gram_max_eigenvalue());
  if (norm.is_p()) return std::max(1.0, std::pow(double(m), norm.exponent().reciprocal() - 0.5));
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) total += norm(Vec<Scalar>::Unit(m, i));
  return total;  // |y| <= sum_i |y_i| |e_i| <= |y|_2 sum_i |e_i|
}

/// sup |v|_1 / |v| over nonzero v.
template <class Scalar>
double l1_over_norm(const NormSpec<Scalar>& norm, Eigen::Index n) {
  if (norm.is_p()) return std::pow(double(n), 1.0 - norm.exponent().reciprocal());
  if (norm.is_inner_product()) return std::sqrt(double(n)) / std::sqrt(norm.gram_min_eigenvalue());
  return kInf;
}

/// sup |y| / |y|_inf over nonzero y.
template <class Scalar>
double norm_over_linf(const NormSpec<Scalar>& norm, Eigen::Index m) {
  if (norm.is_p()) return std::pow(double(m), norm.exponent().reciprocal());
  if (norm.is_inner_product()) return std::sqrt(norm.gram_max_eigenvalue() * double(m));
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) total += norm(Vec<Scalar>::Unit(m, i));
  return total;
}

template <class Scalar>
CertifiedValue<Scalar> spectral(const LinearMap<Scalar>& t, const Tolerances& tol, std::uint64_t seed) {
  const Mat<Scalar> rv = euclidean_factor(t.domain, t.cols());
  const Mat<Scalar> rw = euclidean_factor(t.codomain, t.rows());
  const Mat<Scalar> rv_inv = rv.template triangularView<Eigen::Upper>().solve(Mat<Scalar>::Identity(t.cols(), t.cols()));
  const Mat<Scalar> whitened = rw * t.matrix * rv_inv;

  const PowerIteration<Scalar> pi = power_iteration<Scalar>(whitened, seed, tol.eps_iter, tol.max_iter);
  CertifiedValue<Scalar> out;
  out.iterations = pi.iterations;
  out.witness = Vec<Scalar>(rv_inv * pi.vector);
  out.lower = pi.sigma;
  if (pi.certified) {
    out.upper = pi.sigma;
    out.exact = true;
  } else {
    const double col = whitened.cwiseAbs().colwise().sum().maxCoeff();
    const double row = whitened.cwiseAbs().rowwise().sum().maxCoeff();
    out.upper = std::max(out.lower, std::min(whitened.norm(), std::sqrt(col * row)));
  }
  return out;
}

/// Real l_inf -> l1 norm by enumerating the vertices of the cube (v and -v
/// give the same value, so the first sign is fixed).
CertifiedValue<double> sign_enumeration(const LinearMap<double>& t) {
  const Eigen::Index n = t.cols();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd best_v = v;
  double best = -1.0;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (Eigen::Index j = 1; j < n; ++j) v(j) = (mask >> (j - 1)) & 1U ? -1.0 : 1.0;
    const double value = (t.matrix * v).cwiseAbs().sum();
    if (value > best) {
      best = value;
      best_v = v;
    }
  }
  return CertifiedValue<double>::exactly(best, best_v);
}

/// Randomized local ascent on |T v|_W / |v|_V, used when a norm is custom.
template <class Scalar>
void ratio_search(const LinearMap<Scalar>& t, Rng& rng, const Tolerances& tol, double& best, Vec<Scalar>& best_v,
                  int& iterations) {
  const Eigen::Index n = t.cols();
  auto ratio = [&](const Vec<Scalar>& v) {
    const double r = t.domain(v);
    return r > 0.0 ? t.codomain(Vec<Scalar>(t.matrix * v)) / r : 0.0;
  };
  std::vector<Vec<Scalar>> starts;
  for (Eigen::Index j = 0; j < n; ++j) starts.push_back(Vec<Scalar>::Unit(n, j));
  for (int k = 0; k < kRestarts; ++k) starts.push_back(random_vector<Scalar>(n, rng));
  const int steps = std::max(50, tol.max_iter / static_cast<int>(starts.size()));
  for (const Vec<Scalar>& start : starts) {
    Vec<Scalar> v = start;
    double value = ratio(v);
    double step = 0.5 * v.norm();
    for (int s = 0; s < steps && step > tol.eps_exact * v.norm(); ++s, ++iterations) {
      const Vec<Scalar> candidate = v + step * random_vector<Scalar>(n, rng) / std::sqrt(double(n));
      const double c = ratio(candidate);
      if (c > value) {
        v = candidate;
        value = c;
        step *= 1.5;
      } else {
        step *= 0.9;
      }
    }
    if (value > best) {
      best = value;
      best_v = v / t.domain(v);
    }
  }
}

/// Generalized power iteration: v -> attaining vector of T^T mu, where mu
/// norms T v. The objective |T v| never decreases along the iteration.
template <class Scalar>
void norming_ascent(const LinearMap<Scalar>& t, Rng& rng, const Tolerances& tol, double& best, Vec<Scalar>& best_v,
                    int& iterations) {
  const Eigen::Index n = t.cols();
  std::vector<Vec<Scalar>> starts;
  for (Eigen::Index j = 0; j < n; ++j) starts.push_back(Vec<Scalar>::Unit(n, j));
  for (int k = 0; k < kRestarts; ++k) starts.push_back(random_vector<Scalar>(n, rng));
  const int cap = std::max(1, std::min(tol.max_iter, 500));
  for (const Vec<Scalar>& start : starts) {
    Vec<Scalar> v = start / t.domain(start);
    double value = t.codomain(Vec<Scalar>(t.matrix * v));
    for (int it = 0; it < cap; ++it, ++iterations) {
      const Vec<Scalar> y = t.matrix * v;
      if (y.isZero(0.0)) break;
      const Vec<Scalar> mu = norming_functional(y, t.codomain).weights;
      const Vec<Scalar> g = t.matrix.transpose() * mu;
      if (g.isZero(0.0)) break;
      const Vec<Scalar> next = attaining_vector(g, t.domain);
      const double next_value = t.codomain(Vec<Scalar>(t.matrix * next));
      if (next_value <= value * (1.0 + 1e-15)) break;
      v = next;
      value = next_value;
    }
    if (value > best) {
      best = value;
      best_v = v;
    }
  }
}

template <class Scalar>
double rigorous_upper(const LinearMap<Scalar>& t, const Tolerances& tol) {
  const Eigen::Index n = t.cols();
  const Eigen::Index m = t.rows();
  double upper = kInf;
  // Through the l1 domain (column rule) and the l_inf codomain (row rule).
  {
    LinearMap<Scalar> via = t;
    via.domain = NormSpec<Scalar>::p(1.0);
    upper = std::min(upper, l1_over_norm(t.domain, n) * column_rule(via).upper);
  }
  if (!t.domain.is_custom()) {
    LinearMap<Scalar> via = t;
    via.codomain = NormSpec<Scalar>::inf();
    upper = std::min(upper, norm_over_linf(t.codomain, m) * row_rule(via, tol).upper);
  }
  // Through l2 with the largest singular value.
  const double sigma = jacobi_spectral_norm<Scalar>(t.matrix) * (1.0 + 1e-12);
  upper = std::min(upper, l2_over_norm(t.domain, n) * sigma * norm_over_l2(t.codomain, m));
  if (t.domain.is_p() && t.codomain.is_p() && t.domain.exponent() == t.codomain.exponent()) {
    // |T|_p <= |T|_1^{1/p} |T|_inf^{1 - 1/p}
    const double r = t.domain.exponent().reciprocal();
    const double col = t.matrix.cwiseAbs().colwise().sum().maxCoeff();
    const double row = t.matrix.cwiseAbs().rowwise().sum().maxCoeff();
    upper = std::min(upper, std::pow(col, r) * std::pow(row, 1.0 - r) * (1.0 + 1e-12));
  }
  if (t.domain.is_inf() && t.codomain.is_p(1.0)) upper = std::min(upper, t.matrix.cwiseAbs().sum());
  return upper;
}

}  // namespace

template <class Scalar>
void validate(const LinearMap<Scalar>& t) {
  require(t.rows() > 0 && t.cols() > 0, "linear map: empty matrix");
  if (t.domain.is_inner_product())
    require(t.domain.gram().rows() == t.cols(), "linear map: domain Gram dimension mismatch");
  if (t.codomain.is_inner_product())
    require(t.codomain.gram().rows() == t.rows(), "linear map: codomain Gram dimension mismatch");
}

template <class Scalar>
CertifiedValue<Scalar> column_rule(const LinearMap<Scalar>& t) {
  validate(t);
  require(t.domain.is_p(1.0), "column_rule: domain must be l1");
  double best = -1.0;
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    const double value = t.codomain(Vec<Scalar>(t.matrix.col(j)));
    if (value > best) {
      best = value;
      k = j;
    }
  }
  return CertifiedValue<Scalar>::exactly(best, Vec<Scalar>(Vec<Scalar>::Unit(t.cols(), k)));
}

template <class Scalar>
CertifiedValue<Scalar> row_rule(const LinearMap<Scalar>& t, const Tolerances& tol) {
  validate(t);
  require(t.codomain.is_inf(), "row_rule: codomain must be l_inf");
  CertifiedValue<Scalar> out;
  out.exact = true;
  out.lower = out.upper = -1.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const Functional<Scalar> row{Vec<Scalar>(t.matrix.row(i).transpose()), t.domain};
    const CertifiedValue<Scalar> d = dual_norm(row, tol, static_cast<std::uint64_t>(i));
    out.exact = out.exact && d.exact;
    out.upper = std::max(out.upper, d.upper);
    if (d.lower > out.lower) {
      out.lower = d.lower;
      out.witness = d.witness;
    }
  }
  return out;
}

template <class Scalar>
CertifiedValue<Scalar> operator_norm(const LinearMap<Scalar>& t, const Tolerances& tol, std::uint64_t seed) {
  validate(t);
  if (t.domain.is_p(1.0)) return column_rule(t);
  if (t.codomain.is_inf() && !t.domain.is_custom()) return row_rule(t, tol);
  if (t.domain.is_euclidean_like() && t.codomain.is_euclidean_like()) return spectral(t, tol, seed);
  if constexpr (!is_complex_v<Scalar>) {
    if (t.domain.is_inf() && t.codomain.is_p(1.0) && t.cols() <= kMaxSignColumns) return sign_enumeration(t);
  }

  Rng rng(seed);
  double best = 0.0;
  Vec<Scalar> best_v = Vec<Scalar>::Unit(t.cols(), 0);
  best_v /= t.domain(best_v);
  int iterations = 0;
  if (t.domain.is_custom() || t.codomain.is_custom()) {
    ratio_search(t, rng, tol, best, best_v, iterations);
  } else {
    norming_ascent(t, rng, tol, best, best_v, iterations);
  }

  CertifiedValue<Scalar> out;
  out.lower = best;
  out.upper = std::max(best, rigorous_upper(t, tol));
  out.exact = out.upper - out.lower <= tol.eps_exact * std::max(1.0, out.upper);
  out.witness = best_v;
  out.iterations = iterations;
  return out;
}

template <class Scalar>
LinearMap<Scalar> adjoint(const LinearMap<Scalar>& t) {
  validate(t);
  const auto domain_dual = t.domain.dual();
  const auto codomain_dual = t.codomain.dual();
  require(domain_dual.has_value() && codomain_dual.has_value(), "adjoint: dual norm unavailable for custom norms");
  return LinearMap<Scalar>{Mat<Scalar>(t.matrix.transpose()), *codomain_dual, *domain_dual};
}

template <class Scalar>
AdjointCheck<Scalar> adjoint_norm_check(const LinearMap<Scalar>& t, const Tolerances& tol, std::uint64_t seed) {
  AdjointCheck<Scalar> out;
  out.primal = operator_norm(t, tol, seed);
  out.dual = operator_norm(adjoint(t), tol, seed);
  const double slack = tol.eps_iter * std::max({1.0, out.primal.upper, out.dual.upper});
  out.consistent = out.primal.lower <= out.dual.upper + slack && out.dual.lower <= out.primal.upper + slack;
  return out;
}

template <class Scalar>
double rank_one_norm(const Functional<Scalar>& lambda, const Vec<Scalar>& w, const NormSpec<Scalar>& codomain_norm,
                     const Tolerances& tol) {
  const CertifiedValue<Scalar> d = dual_norm(lambda, tol);
  return (d.exact ? d.upper : d.lower) * codomain_norm(w);
}

#define NORMKIT_INSTANTIATE(S)                                                                            \
  template void validate<S>(const LinearMap<S>&);                                                         \
  template CertifiedValue<S> operator_norm<S>(const LinearMap<S>&, const Tolerances&, std::uint64_t);     \
  template CertifiedValue<S> column_rule<S>(const LinearMap<S>&);                                         \
  template CertifiedValue<S> row_rule<S>(const LinearMap<S>&, const Tolerances&);                         \
  template LinearMap<S> adjoint<S>(const LinearMap<S>&);                                                  \
  template AdjointCheck<S> adjoint_norm_check<S>(const LinearMap<S>&, const Tolerances&, std::uint64_t);  \
  template double rank_one_norm<S>(const Functional<S>&, const Vec<S>&, const NormSpec<S>&, const Tolerances&);

NORMKIT_INSTANTIATE(double)
NORMKIT_INSTANTIATE(Complex)
#undef NORMKIT_INSTANTIATE

}  // namespace normkit
