#include "normkit/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normkit/linalg.hpp"
#include "normkit/random.hpp"

namespace normkit {

template <class Scalar>
Subspace<Scalar>::Subspace(Mat<Scalar> basis, double eps) : basis_(std::move(basis)) {
  require(basis_.rows() > 0, "subspace: ambient dimension must be positive");
  require(basis_.cols() <= basis_.rows(), "subspace: more basis vectors than the ambient dimension");
  if (basis_.cols() == 0) return;
  Eigen::FullPivLU<Mat<Scalar>> lu(basis_);
  lu.setThreshold(eps);
  require(lu.rank() == basis_.cols(), "subspace: basis vectors are linearly dependent");
}

template <class Scalar>
Subspace<Scalar> Subspace<Scalar>::span(const std::vector<Vec<Scalar>>& vectors, Eigen::Index ambient, double eps) {
  Mat<Scalar> b(ambient, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require(vectors[j].size() == ambient, "subspace: basis vector has the wrong dimension");
    b.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return Subspace(std::move(b), eps);
}

namespace {

/// Best representative x + B c found so far.
template <class Scalar>
struct Minimizer {
  Vec<Scalar> c;
  Vec<Scalar> residual;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

template <class Scalar>
Vec<Scalar> coefficients(const Eigen::VectorXd& theta, Eigen::Index k) {
  if constexpr (is_complex_v<Scalar>) {
    Vec<Scalar> c(k);
    for (Eigen::Index i = 0; i < k; ++i) c(i) = Scalar(theta(i), theta(k + i));
    return c;
  } else {
    return theta;
  }
}

template <class Scalar>
Eigen::VectorXd parameters(const Vec<Scalar>& c) {
  if constexpr (is_complex_v<Scalar>) {
    Eigen::VectorXd theta(2 * c.size());
    theta << c.real(), c.imag();
    return theta;
  } else {
    return c;
  }
}

/// Least squares in the metric of an inner-product norm (or plain l2).
template <class Scalar>
Vec<Scalar> whitened_least_squares(const Vec<Scalar>& x, const Mat<Scalar>& b, const NormSpec<Scalar>& norm) {
  if (norm.is_inner_product()) {
    const Mat<Scalar>& r = norm.cholesky_upper();
    return Mat<Scalar>(r * b).colPivHouseholderQr().solve(Vec<Scalar>(-(r * x)));
  }
  return b.colPivHouseholderQr().solve(Vec<Scalar>(-x));
}

/// Visits every `size`-subset of {0, ..., n-1} in lexicographic order.
template <class F>
void for_each_subset(Eigen::Index n, Eigen::Index size, F&& visit) {
  if (size > n) return;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(size));
  for (Eigen::Index i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    Eigen::Index i = size - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - size + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < size; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Real l1 or l_inf: the minimum of a piecewise-linear convex function sits
/// at a vertex of its breakpoint arrangement, so solving every square
/// subsystem of active pieces and keeping the best value is exact.
Minimizer<double> vertex_enumeration(const Eigen::VectorXd& x, const Eigen::MatrixXd& b, bool l1) {
  const Eigen::Index n = b.rows();
  const Eigen::Index k = b.cols();
  const NormSpec<double> norm = l1 ? NormSpec<double>::p(1.0) : NormSpec<double>::inf();
  Minimizer<double> best;
  auto consider = [&](const Eigen::VectorXd& c) {
    const Eigen::VectorXd r = x + b * c;
    const double value = norm(r);
    ++best.iterations;
    if (value < best.value) {
      best.value = value;
      best.c = c;
      best.residual = r;
    }
  };
  consider(Eigen::VectorXd::Zero(k));
  if (l1) {
    // k of the terms x_i + B_i c vanish
    for_each_subset(n, k, [&](const std::vector<Eigen::Index>& rows) {
      Eigen::MatrixXd m(k, k);
      Eigen::VectorXd rhs(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        m.row(i) = b.row(rows[static_cast<std::size_t>(i)]);
        rhs(i) = -x(rows[static_cast<std::size_t>(i)]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (lu.isInvertible()) consider(lu.solve(rhs));
    });
  } else {
    // k + 1 of the constraints s (x_i + B_i c) = t are active
    for_each_subset(2 * n, k + 1, [&](const std::vector<Eigen::Index>& rows) {
      Eigen::MatrixXd m(k + 1, k + 1);
      Eigen::VectorXd rhs(k + 1);
      for (Eigen::Index i = 0; i <= k; ++i) {
        const Eigen::Index row = rows[static_cast<std::size_t>(i)] / 2;
        const double s = rows[static_cast<std::size_t>(i)] % 2 == 0 ? 1.0 : -1.0;
        m.row(i).head(k) = s * b.row(row);
        m(i, k) = -1.0;
        rhs(i) = -s * x(row);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (lu.isInvertible()) consider(Eigen::VectorXd(lu.solve(rhs).head(k)));
    });
  }
  return best;
}

/// max lambda^T x over { B^T lambda = 0, |lambda|_q <= 1 } for real l1
/// (q = inf) or l_inf (q = 1). By linear programming duality the value is
/// dist(x, W).
std::optional<Eigen::VectorXd> annihilator_lp(const Eigen::VectorXd& x, const Eigen::MatrixXd& b, bool l1,
                                              int max_iter) {
  const Eigen::Index n = x.size();
  const Eigen::Index k = b.cols();
  if (l1) {
    // u = lambda + 1 in [0, 2]^n
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + n, 2 * n);
    Eigen::VectorXd rhs(k + n);
    a.topLeftCorner(k, n) = b.transpose();
    rhs.head(k) = b.transpose() * Eigen::VectorXd::Ones(n);
    a.bottomLeftCorner(n, n).setIdentity();
    a.bottomRightCorner(n, n).setIdentity();
    rhs.tail(n).setConstant(2.0);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
    c.head(n) = x;
    const LinearProgram lp = simplex_maximize(a, rhs, c, max_iter);
    if (lp.status != LinearProgram::Status::Optimal) return std::nullopt;
    return Eigen::VectorXd(lp.x.head(n).array() - 1.0);
  }
  // lambda = lambda+ - lambda-, sum(lambda+ + lambda-) + slack = 1
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, 2 * n + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  a.topLeftCorner(k, n) = b.transpose();
  a.block(0, n, k, n) = -b.transpose();
  a.row(k).setOnes();
  rhs(k) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n + 1);
  c.head(n) = x;
  c.segment(n, n) = -x;
  const LinearProgram lp = simplex_maximize(a, rhs, c, max_iter);
  if (lp.status != LinearProgram::Status::Optimal) return std::nullopt;
  return Eigen::VectorXd(lp.x.head(n) - lp.x.segment(n, n));
}

/// Quasi-Newton descent on theta -> |x + B c(theta)| using the norming
/// functional of the residual as (sub)gradient, then compass search.
template <class Scalar>
Minimizer<Scalar> descend(const Vec<Scalar>& x, const Mat<Scalar>& b, const NormSpec<Scalar>& norm,
                          const Tolerances& tol) {
  const Eigen::Index k = b.cols();
  const Eigen::Index d = is_complex_v<Scalar> ? 2 * k : k;
  Minimizer<Scalar> best;
  auto f = [&](const Eigen::VectorXd& theta) {
    ++best.iterations;
    return norm(Vec<Scalar>(x + b * coefficients<Scalar>(theta, k)));
  };
  auto gradient = [&](const Eigen::VectorXd& theta) -> Eigen::VectorXd {
    const Vec<Scalar> r = x + b * coefficients<Scalar>(theta, k);
    if (r.isZero(0.0)) return Eigen::VectorXd::Zero(d);
    const Vec<Scalar> h = b.transpose() * norming_functional(r, norm).weights;
    if constexpr (is_complex_v<Scalar>) {
      Eigen::VectorXd g(d);
      g << h.real(), -h.imag();
      return g;
    } else {
      return h;
    }
  };

  const double scale = std::max(1.0, norm(x));
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  double value = f(theta);
  if (!norm.is_custom()) {
    const Eigen::VectorXd start = parameters<Scalar>(whitened_least_squares(x, b, NormSpec<Scalar>::p(2.0)));
    const double start_value = f(start);
    if (start_value < value) {
      theta = start;
      value = start_value;
    }
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd g = gradient(theta);
    for (int it = 0; it < tol.max_iter && g.norm() > 1e-15; ++it) {
      Eigen::VectorXd dir = -h * g;
      if (dir.dot(g) >= 0.0) {
        h.setIdentity();
        dir = -g;
      }
      double step = 1.0;
      bool moved = false;
      for (int back = 0; back < 60; ++back, step *= 0.5) {
        const Eigen::VectorXd trial = theta + step * dir;
        const double trial_value = f(trial);
        if (trial_value <= value + 1e-4 * step * dir.dot(g)) {
          const Eigen::VectorXd s = trial - theta;
          const Eigen::VectorXd g_new = gradient(trial);
          const Eigen::VectorXd y = g_new - g;
          const double sy = s.dot(y);
          if (sy > 1e-300) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
            h = (id - rho * s * y.transpose()) * h * (id - rho * y * s.transpose()) + rho * s * s.transpose();
          }
          theta = trial;
          value = trial_value;
          g = g_new;
          moved = true;
          break;
        }
      }
      if (!moved || step * dir.norm() <= 1e-16 * std::max(1.0, theta.norm())) break;
    }
  }

  // Compass search polishes non-smooth minima and handles custom norms.
  double step = 0.25 * scale;
  while (step > 1e-15 * scale && best.iterations < 50 * tol.max_iter) {
    bool improved = false;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd trial = theta;
        trial(i) += sign * step;
        const double trial_value = f(trial);
        if (trial_value < value) {
          theta = trial;
          value = trial_value;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  best.c = coefficients<Scalar>(theta, k);
  best.residual = x + b * best.c;
  best.value = value;
  return best;
}

/// lambda - conj(B) (B^T conj(B))^{-1} B^T lambda, which vanishes on W.
template <class Scalar>
Vec<Scalar> project_to_annihilator(const Vec<Scalar>& lambda, const Mat<Scalar>& b) {
  if (b.cols() == 0) return lambda;
  const Mat<Scalar> bc = b.conjugate();
  const Mat<Scalar> gram = b.transpose() * bc;
  return lambda - bc * gram.ldlt().solve(Vec<Scalar>(b.transpose() * lambda));
}

/// Lower bound |mu(x)| / |mu|_* from the annihilating functional built at
/// the residual r.
template <class Scalar>
double annihilator_bound(const Vec<Scalar>& x, const Vec<Scalar>& r, const Mat<Scalar>& b,
                         const NormSpec<Scalar>& norm) {
  if (norm.is_custom() || r.isZero(0.0)) return 0.0;
  const Vec<Scalar> mu = project_to_annihilator<Scalar>(norming_functional(r, norm).weights, b);
  const double dual = (*norm.dual())(mu);
  if (!(dual > 0.0)) return 0.0;
  return std::abs(Scalar(mu.transpose() * x)) / dual;
}

template <class Scalar>
CertifiedValue<Scalar> finish(double lower, double upper, const Vec<Scalar>& residual, int iterations,
                              const Tolerances& tol) {
  CertifiedValue<Scalar> out;
  out.upper = upper;
  out.lower = std::min(lower, upper);
  out.exact = out.upper - out.lower <= tol.eps_exact * std::max(1.0, out.upper);
  out.witness = residual;
  out.iterations = iterations;
  return out;
}

}  // namespace

template <class Scalar>
CertifiedValue<Scalar> quotient_norm(const Vec<Scalar>& x, const Subspace<Scalar>& w, const NormSpec<Scalar>& norm,
                                     const Tolerances& tol) {
  require(x.size() == w.ambient_dimension(), "quotient_norm: dimension mismatch");
  const Mat<Scalar>& b = w.basis();
  if (b.cols() == 0) return CertifiedValue<Scalar>::exactly(norm(x), x);

  if (norm.is_euclidean_like()) {
    const Vec<Scalar> r = x + b * whitened_least_squares(x, b, norm);
    const double value = std::min(norm(r), norm(x));
    return CertifiedValue<Scalar>::exactly(value, norm(r) <= norm(x) ? r : x);
  }

  if constexpr (!is_complex_v<Scalar>) {
    if (norm.is_p(1.0) || norm.is_inf()) {
      const bool l1 = norm.is_p(1.0);
      if (b.cols() <= 2) {
        const Minimizer<double> m = vertex_enumeration(x, b, l1);
        CertifiedValue<double> out = CertifiedValue<double>::exactly(m.value, m.residual);
        out.iterations = m.iterations;
        return out;
      }
      const std::optional<Eigen::VectorXd> lambda = annihilator_lp(x, b, l1, tol.max_iter);
      if (lambda) {
        const Minimizer<double> m = descend<double>(x, b, norm, tol);
        // LP duality: the optimal pairing is the distance itself; the
        // descent only supplies a representative.
        const double value = lambda->dot(x) / std::max(1.0, (*norm.dual())(*lambda));
        CertifiedValue<double> out = CertifiedValue<double>::exactly(value, m.residual);
        out.iterations = m.iterations;
        return out;
      }
    }
  }

  const Minimizer<Scalar> m = descend<Scalar>(x, b, norm, tol);
  const double upper = std::min(m.value, norm(x));
  const double lower = annihilator_bound<Scalar>(x, m.residual, b, norm);
  return finish<Scalar>(lower, upper, m.value <= norm(x) ? m.residual : x, m.iterations, tol);
}

namespace {

/// Basis of ker lambda inside Z together with z0 in Z, lambda(z0) = 1.
template <class Scalar>
std::pair<Mat<Scalar>, Vec<Scalar>> kernel_split(const Subspace<Scalar>& z, const Vec<Scalar>& values,
                                                 const Tolerances& tol) {
  const Eigen::Index k = z.dimension();
  const Vec<Scalar> y0 = values.conjugate() / values.squaredNorm();
  Mat<Scalar> kernel(k, 0);
  if (k > 1) {
    Eigen::FullPivLU<Mat<Scalar>> lu(Mat<Scalar>(values.transpose()));
    lu.setThreshold(tol.eps_exact);
    kernel = lu.kernel();
  }
  return {Mat<Scalar>(z.basis() * kernel), Vec<Scalar>(z.basis() * y0)};
}

}  // namespace

template <class Scalar>
CertifiedValue<Scalar> subspace_functional_norm(const Subspace<Scalar>& z, const Vec<Scalar>& values,
                                                const NormSpec<Scalar>& norm, const Tolerances& tol) {
  require(values.size() == z.dimension(), "subspace_functional_norm: one value per basis vector is required");
  if (values.isZero(0.0)) return CertifiedValue<Scalar>::exactly(0.0);
  const auto [kernel, z0] = kernel_split(z, values, tol);
  const CertifiedValue<Scalar> dist = quotient_norm<Scalar>(z0, Subspace<Scalar>(kernel), norm, tol);
  CertifiedValue<Scalar> out;
  out.lower = 1.0 / dist.upper;
  out.upper = dist.lower > 0.0 ? 1.0 / dist.lower : std::numeric_limits<double>::infinity();
  out.exact = dist.exact;
  if (out.exact) out.lower = out.upper;
  out.iterations = dist.iterations;
  return out;
}

template <class Scalar>
Extension<Scalar> extend_functional(const Subspace<Scalar>& z, const Vec<Scalar>& values,
                                    const NormSpec<Scalar>& norm, const Tolerances& tol) {
  require(values.size() == z.dimension(), "extend_functional: one value per basis vector is required");
  require(!norm.is_custom(), "extend_functional: needs a p-norm or inner-product norm");
  const Eigen::Index n = z.ambient_dimension();
  Extension<Scalar> out;
  out.functional.space_norm = norm;
  if (values.isZero(0.0)) {
    out.functional.weights = Vec<Scalar>::Zero(n);
    out.norm_on_subspace = CertifiedValue<Scalar>::exactly(0.0);
    out.exact = true;
    return out;
  }

  const auto [kernel, z0] = kernel_split(z, values, tol);
  const Subspace<Scalar> w(kernel);
  const CertifiedValue<Scalar> dist = quotient_norm<Scalar>(z0, w, norm, tol);
  out.norm_on_subspace = subspace_functional_norm(z, values, norm, tol);

  Vec<Scalar> lambda;
  bool via_lp = false;
  if constexpr (!is_complex_v<Scalar>) {
    if (norm.is_p(1.0) || norm.is_inf()) {
      const std::optional<Eigen::VectorXd> opt = annihilator_lp(z0, kernel, norm.is_p(1.0), tol.max_iter);
      if (opt) {
        lambda = *opt;
        via_lp = true;
      }
    }
  }
  if (!via_lp) lambda = project_to_annihilator<Scalar>(norming_functional(*dist.witness, norm).weights, kernel);

  // Rescale so that f(z0) = 1; f already vanishes on ker lambda.
  const Scalar at_z0 = lambda.transpose() * z0;
  require(std::abs(at_z0) > 0.0, "extend_functional: degenerate annihilating functional");
  out.functional.weights = lambda / at_z0;
  out.dual_norm = (*norm.dual())(out.functional.weights);
  out.exact = out.norm_on_subspace.exact &&
              std::abs(out.dual_norm - out.norm_on_subspace.upper) <=
                  tol.eps_exact * std::max(1.0, out.norm_on_subspace.upper);
  return out;
}

template <class Scalar>
QuotientMapReport quotient_map_check(const Subspace<Scalar>& w, const NormSpec<Scalar>& norm, int trials,
                                     std::uint64_t seed, const Tolerances& tol) {
  const Eigen::Index n = w.ambient_dimension();
  Rng rng(seed);
  QuotientMapReport out;
  auto q = [&](const Vec<Scalar>& x) { return quotient_norm<Scalar>(x, w, norm, tol); };
  for (int t = 0; t < trials; ++t) {
    const Vec<Scalar> x = random_vector<Scalar>(n, rng);
    const Vec<Scalar> y = random_vector<Scalar>(n, rng);
    const Scalar alpha = random_scalar<Scalar>(rng);
    const CertifiedValue<Scalar> qx = q(x);
    const CertifiedValue<Scalar> qy = q(y);

    const CertifiedValue<Scalar> qax = q(Vec<Scalar>(alpha * x));
    const double a = std::abs(alpha);
    const double slack = tol.eps_iter * std::max(1.0, a * qx.upper);
    if (qax.lower > a * qx.upper + slack || qax.upper < a * qx.lower - slack) ++out.homogeneity_failures;

    const CertifiedValue<Scalar> qxy = q(Vec<Scalar>(x + y));
    if (qxy.lower > qx.upper + qy.upper + tol.eps_iter * std::max(1.0, qx.upper + qy.upper)) ++out.triangle_failures;

    if (w.dimension() > 0) {
      const Vec<Scalar> member = w.basis() * random_vector<Scalar>(w.dimension(), rng);
      if (q(member).upper > tol.eps_iter * std::max(1.0, norm(member))) ++out.zero_failures;
    }
    if (!(qx.upper > 0.0)) ++out.zero_failures;
  }
  out.holds = out.homogeneity_failures == 0 && out.triangle_failures == 0 && out.zero_failures == 0;
  return out;
}

#define NORMKIT_INSTANTIATE(S)                                                                                   \
  template class Subspace<S>;                                                                                    \
  template CertifiedValue<S> quotient_norm<S>(const Vec<S>&, const Subspace<S>&, const NormSpec<S>&,             \
                                              const Tolerances&);                                                \
  template CertifiedValue<S> subspace_functional_norm<S>(const Subspace<S>&, const Vec<S>&, const NormSpec<S>&,  \
                                                         const Tolerances&);                                     \
  template Extension<S> extend_functional<S>(const Subspace<S>&, const Vec<S>&, const NormSpec<S>&,              \
                                             const Tolerances&);                                                 \
  template QuotientMapReport quotient_map_check<S>(const Subspace<S>&, const NormSpec<S>&, int, std::uint64_t,   \
                                                   const Tolerances&);

NORMKIT_INSTANTIATE(double)
NORMKIT_INSTANTIATE(Complex)
#undef NORMKIT_INSTANTIATE

}  // namespace normkit
