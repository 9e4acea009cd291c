#include "normkit/duality.hpp"

#include <algorithm>
#include <cmath>

#include "normkit/random.hpp"
#include "normkit/spaces.hpp"

namespace normkit {

namespace {

/// Unit-modulus phase of a nonzero scalar; zero maps to zero.
template <class Scalar>
Scalar phase(Scalar z) {
  const double r = std::abs(z);
  return r == 0.0 ? Scalar(0) : z / r;
}

template <class Scalar>
Scalar conj_of(Scalar z) {
  return Eigen::numext::conj(z);
}

/// Randomized local ascent on |w^T v| / N(v) for norms with no closed-form
/// dual.
template <class Scalar>
CertifiedValue<Scalar> estimate_dual_norm(const Vec<Scalar>& w, const NormSpec<Scalar>& norm, const Tolerances& tol,
                                          std::uint64_t seed) {
  const Eigen::Index n = w.size();
  Rng rng(seed);
  auto ratio = [&](const Vec<Scalar>& v) {
    const double r = norm(v);
    return r > 0.0 ? std::abs(pairing(w, v)) / r : 0.0;
  };

  std::vector<Vec<Scalar>> starts;
  for (Eigen::Index i = 0; i < n; ++i) starts.push_back(Vec<Scalar>::Unit(n, i));
  starts.push_back(w.conjugate());
  constexpr int kRestarts = 16;
  for (int k = 0; k < kRestarts; ++k) starts.push_back(random_vector<Scalar>(n, rng));

  const int steps = std::max(50, tol.max_iter / static_cast<int>(starts.size()));
  CertifiedValue<Scalar> out;
  out.upper = std::numeric_limits<double>::infinity();
  out.exact = false;
  double best = -1.0;
  for (const Vec<Scalar>& start : starts) {
    Vec<Scalar> v = start;
    double value = ratio(v);
    double step = 0.5 * v.norm();
    for (int s = 0; s < steps && step > tol.eps_exact * v.norm(); ++s) {
      const Vec<Scalar> candidate = v + step * random_vector<Scalar>(n, rng) / std::sqrt(double(n));
      const double c = ratio(candidate);
      if (c > value) {
        v = candidate;
        value = c;
        step *= 1.5;
      } else {
        step *= 0.9;
      }
      ++out.iterations;
    }
    if (value > best) {
      best = value;
      out.witness = Vec<Scalar>(v / norm(v));
    }
  }
  out.lower = std::max(best, 0.0);
  return out;
}

}  // namespace

template <class Scalar>
Scalar evaluate(const Functional<Scalar>& f, const Vec<Scalar>& v) {
  require(f.weights.size() == v.size(), "evaluate: dimension mismatch");
  return pairing(f.weights, v);
}

template <class Scalar>
Vec<Scalar> attaining_vector(const Vec<Scalar>& w, const NormSpec<Scalar>& space_norm) {
  const std::optional<NormSpec<Scalar>> dual = space_norm.dual();
  require(dual.has_value(), "attaining_vector: norm has no closed-form dual");
  if (w.isZero(0.0)) {
    Vec<Scalar> e = Vec<Scalar>::Unit(w.size(), 0);
    return Vec<Scalar>(e / space_norm(e));
  }
  // The dual of the dual norm is the original norm, so a norming functional
  // of w in the dual space is a unit vector of the original space.
  return norming_functional(w, *dual).weights;
}

template <class Scalar>
CertifiedValue<Scalar> dual_norm(const Functional<Scalar>& f, const Tolerances& tol, std::uint64_t seed) {
  const NormSpec<Scalar>& norm = f.space_norm;
  if (norm.is_custom()) return estimate_dual_norm(f.weights, norm, tol, seed);
  const NormSpec<Scalar> dual = *norm.dual();
  return CertifiedValue<Scalar>::exactly(dual(f.weights), attaining_vector(f.weights, norm));
}

template <class Scalar>
Functional<Scalar> norming_functional(const Vec<Scalar>& v, const NormSpec<Scalar>& space_norm) {
  require(v.size() > 0, "norming_functional: empty vector");
  require(!v.isZero(0.0), "norming_functional: v must be nonzero");
  require(!space_norm.is_custom(), "norming_functional: needs a p-norm or inner-product norm");
  const Eigen::Index n = v.size();
  Functional<Scalar> f;
  f.space_norm = space_norm;
  f.weights = Vec<Scalar>::Zero(n);

  if (space_norm.is_inner_product()) {
    const Vec<Scalar> gv = space_norm.gram() * v;
    f.weights = gv.conjugate() / space_norm(v);
    return f;
  }

  const Exponent p = space_norm.exponent();
  if (p.is_inf()) {
    Eigen::Index k = 0;
    double largest = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(v(j)) > largest) {
        largest = std::abs(v(j));
        k = j;
      }
    }
    f.weights(k) = conj_of(phase(v(k)));
  } else if (p.is(1.0)) {
    for (Eigen::Index j = 0; j < n; ++j) f.weights(j) = conj_of(phase(v(j)));
  } else if (p.is(2.0)) {
    f.weights = v.conjugate() / v.norm();
  } else {
    const double norm = p_norm(v, p);
    const double e = p.value() - 1.0;
    for (Eigen::Index j = 0; j < n; ++j)
      f.weights(j) = conj_of(phase(v(j))) * std::pow(std::abs(v(j)) / norm, e);
  }
  return f;
}

Eigen::VectorXd to_real_coordinates(const Vec<Complex>& v) {
  Eigen::VectorXd x(2 * v.size());
  x.head(v.size()) = v.real();
  x.tail(v.size()) = v.imag();
  return x;
}

Vec<Complex> from_real_coordinates(const Eigen::VectorXd& x) {
  require(x.size() % 2 == 0, "from_real_coordinates: odd length");
  const Eigen::Index n = x.size() / 2;
  Vec<Complex> v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = Complex(x(j), x(n + j));
  return v;
}

RealLinearFunctional real_part_functional(const Functional<Complex>& f) {
  // Re((a + ib)(c + id)) = a c - b d.
  RealLinearFunctional r;
  const Eigen::Index n = f.weights.size();
  r.coefficients.resize(2 * n);
  r.coefficients.head(n) = f.weights.real();
  r.coefficients.tail(n) = -f.weights.imag();
  return r;
}

double evaluate(const RealLinearFunctional& r, const Vec<Complex>& v) {
  require(r.coefficients.size() == 2 * v.size(), "evaluate: dimension mismatch");
  return r.coefficients.dot(to_real_coordinates(v));
}

Functional<Complex> complexify(const RealLinearFunctional& r, const NormSpec<Complex>& space_norm) {
  require(r.coefficients.size() % 2 == 0, "complexify: odd coordinate count");
  const Eigen::Index n = r.coefficients.size() / 2;
  Functional<Complex> f;
  f.space_norm = space_norm;
  f.weights.resize(n);
  const Complex i(0.0, 1.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vec<Complex> e = Vec<Complex>::Unit(n, j);
    f.weights(j) = evaluate(r, e) - i * evaluate(r, Vec<Complex>(i * e));
  }
  return f;
}

NormSpec<double> realified_norm(const NormSpec<Complex>& norm) {
  return NormSpec<double>::custom(
      [norm](const Vec<double>& x) { return norm(from_real_coordinates(x)); }, "realified(" + norm.describe() + ")");
}

template Complex evaluate<Complex>(const Functional<Complex>&, const Vec<Complex>&);
template double evaluate<double>(const Functional<double>&, const Vec<double>&);
template CertifiedValue<double> dual_norm<double>(const Functional<double>&, const Tolerances&, std::uint64_t);
template CertifiedValue<Complex> dual_norm<Complex>(const Functional<Complex>&, const Tolerances&, std::uint64_t);
template Vec<double> attaining_vector<double>(const Vec<double>&, const NormSpec<double>&);
template Vec<Complex> attaining_vector<Complex>(const Vec<Complex>&, const NormSpec<Complex>&);
template Functional<double> norming_functional<double>(const Vec<double>&, const NormSpec<double>&);
template Functional<Complex> norming_functional<Complex>(const Vec<Complex>&, const NormSpec<Complex>&);

}  // namespace normkit
