#include "doctest.h"

#include <cmath>

#include "normkit/quotient.hpp"
#include "normkit/random.hpp"

using namespace normkit;
using doctest::Approx;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Subspace<double> span1(const Eigen::VectorXd& b) { return Subspace<double>(Eigen::MatrixXd(b)); }

/// Golden-section minimum of a convex function of one variable on [lo, hi].
template <class F>
double line_min(F f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  for (int k = 0; k < 200; ++k) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) < f(d)) b = d;
    else a = c;
  }
  return f(0.5 * (a + b));
}

/// min over w in span(B) of |x + w| for a 1- or 2-dimensional B: coarse grid
/// followed by nested golden-section search around the best cell.
double brute_quotient(const Eigen::VectorXd& x, const Eigen::MatrixXd& b, const NormSpec<double>& norm) {
  const double r = 3.0 * norm(x) / std::max(1e-12, b.cwiseAbs().minCoeff() + 0.1);
  if (b.cols() == 1) {
    return line_min([&](double s) { return norm(Eigen::VectorXd(x + s * b.col(0))); }, -r, r);
  }
  return line_min(
      [&](double s) {
        return line_min([&](double u) { return norm(Eigen::VectorXd(x + s * b.col(0) + u * b.col(1))); }, -r, r);
      },
      -r, r);
}

}  // namespace

TEST_CASE("subspace validation") {
  CHECK_THROWS_AS(Subspace<double>(Eigen::MatrixXd::Ones(3, 2)), PreconditionError);
  CHECK_THROWS_AS(Subspace<double>(Eigen::MatrixXd::Identity(2, 3)), PreconditionError);
  CHECK(Subspace<double>::zero(3).dimension() == 0);
  CHECK(Subspace<double>::span({vec({1, 0, 0}), vec({0, 1, 1})}, 3).dimension() == 2);
}

TEST_CASE("quotient norms on fixed inputs") {
  auto q = quotient_norm<double>(vec({3, 4}), span1(vec({1, 0})), NormSpec<double>::p(2.0));
  CHECK(q.exact);
  CHECK(q.value() == Approx(4.0));

  q = quotient_norm<double>(vec({1, -1}), span1(vec({1, 1})), NormSpec<double>::inf());
  CHECK(q.exact);
  CHECK(q.value() == Approx(1.0));
  CHECK(q.value() == Approx(brute_quotient(vec({1, -1}), Eigen::MatrixXd(vec({1, 1})), NormSpec<double>::inf())));

  q = quotient_norm<double>(vec({2, 2}), span1(vec({1, 1})), NormSpec<double>::p(1.0));
  CHECK(q.exact);
  CHECK(q.value() == Approx(0.0));
  CHECK_THROWS_AS(quotient_norm<double>(vec({1, 2, 3}), span1(vec({1, 1})), NormSpec<double>::p(1.0)),
                  PreconditionError);
}

TEST_CASE("l2 quotient norm is the orthogonal-complement distance") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 2 + t % 4;
    const Eigen::Index k = 1 + t % (n - 1);
    const Eigen::MatrixXd b = random_matrix<double>(n, k, rng);
    const Eigen::VectorXd x = random_vector<double>(n, rng);
    const Eigen::MatrixXd qmat = b.householderQr().householderQ() * Eigen::MatrixXd::Identity(n, k);
    const double oracle = (x - qmat * (qmat.transpose() * x)).norm();
    const auto q = quotient_norm<double>(x, Subspace<double>(b), NormSpec<double>::p(2.0));
    CHECK(q.exact);
    CHECK(q.value() == Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("l1 and l_inf quotient norms match brute force") {
  Rng rng(4);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index n = 3 + t % 3;
    const Eigen::Index k = 1 + t % 2;
    const Eigen::MatrixXd b = random_matrix<double>(n, k, rng);
    const Eigen::VectorXd x = random_vector<double>(n, rng);
    for (const auto& norm : {NormSpec<double>::p(1.0), NormSpec<double>::inf()}) {
      const auto q = quotient_norm<double>(x, Subspace<double>(b), norm);
      CHECK(q.exact);
      CHECK(q.value() == Approx(brute_quotient(x, b, norm)).epsilon(1e-4));
      CHECK(q.value() <= norm(x) + 1e-9);
      REQUIRE(q.witness);
      CHECK(norm(*q.witness) == Approx(q.value()).epsilon(1e-9));
    }
  }
}

TEST_CASE("l1 and l_inf quotient norms for larger subspaces use the dual program") {
  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const Eigen::MatrixXd b = random_matrix<double>(5, 3, rng);
    const Eigen::VectorXd x = random_vector<double>(5, rng);
    for (const auto& norm : {NormSpec<double>::p(1.0), NormSpec<double>::inf()}) {
      const auto q = quotient_norm<double>(x, Subspace<double>(b), norm);
      CHECK(q.exact);
      // the minimum over W sits at a vertex: enumerate triples of the active pieces
      double oracle = HUGE_VAL;
      auto try_c = [&](const Eigen::VectorXd& c) { oracle = std::min(oracle, norm(Eigen::VectorXd(x + b * c))); };
      if (norm.is_p(1.0)) {
        for (int i = 0; i < 5; ++i)
          for (int j = i + 1; j < 5; ++j)
            for (int l = j + 1; l < 5; ++l) {
              Eigen::Matrix3d m;
              m << b.row(i), b.row(j), b.row(l);
              try_c(m.fullPivLu().solve(-Eigen::Vector3d(x(i), x(j), x(l))));
            }
      } else {
        for (int mask = 0; mask < (1 << 10); ++mask) {
          if (__builtin_popcount(static_cast<unsigned>(mask)) != 4) continue;
          Eigen::Matrix4d m;
          Eigen::Vector4d rhs;
          int row = 0;
          for (int c = 0; c < 10; ++c) {
            if (!((mask >> c) & 1)) continue;
            const double s = c % 2 ? -1.0 : 1.0;
            m.row(row) << s * b.row(c / 2), -1.0;
            rhs(row++) = -s * x(c / 2);
          }
          Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
          if (lu.isInvertible()) try_c(Eigen::Vector4d(lu.solve(rhs)).head(3));
        }
      }
      CHECK(q.value() == Approx(oracle).epsilon(1e-7));
    }
  }
}

TEST_CASE_TEMPLATE("general quotient norms bracket the infimum", Scalar, double, Complex) {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const Eigen::Index n = 3 + t % 3;
    const Eigen::Index k = 1 + t % 3;
    const Subspace<Scalar> w(random_matrix<Scalar>(n, k, rng));
    const Vec<Scalar> x = random_vector<Scalar>(n, rng);
    for (double p : {1.5, 3.0}) {
      const NormSpec<Scalar> norm = NormSpec<Scalar>::p(p);
      const auto q = quotient_norm<Scalar>(x, w, norm);
      CHECK(q.lower <= q.upper);
      CHECK(q.upper <= norm(x) + 1e-9);
      CHECK(q.upper - q.lower <= 1e-6 * q.upper);
      for (int s = 0; s < 200; ++s) {
        const Vec<Scalar> other = x + w.basis() * random_vector<Scalar>(k, rng);
        CHECK(norm(other) >= q.lower - 1e-9);
      }
    }
  }
}

TEST_CASE_TEMPLATE("quotient norm vanishes exactly on the subspace", Scalar, double, Complex) {
  Rng rng(6);
  for (double p : {1.0, 1.5, 2.0, HUGE_VAL}) {
    const NormSpec<Scalar> norm = NormSpec<Scalar>::p(p);
    const Subspace<Scalar> w(random_matrix<Scalar>(4, 2, rng));
    const Vec<Scalar> member = w.basis() * random_vector<Scalar>(2, rng);
    CHECK(quotient_norm<Scalar>(member, w, norm).upper <= 1e-7 * norm(member));
    const Vec<Scalar> off = member + Vec<Scalar>::Unit(4, 0);
    CHECK(quotient_norm<Scalar>(off, w, norm).upper > 0.0);
    CHECK(quotient_map_check(w, norm, 20, 3).holds);
  }
}

TEST_CASE("extensions on fixed inputs") {
  auto e = extend_functional<double>(span1(vec({1, 0})), vec({1}), NormSpec<double>::p(2.0));
  CHECK((e.functional.weights - vec({1, 0})).norm() < 1e-12);
  CHECK(e.dual_norm == Approx(1.0));

  e = extend_functional<double>(span1(vec({1, 1})), vec({2}), NormSpec<double>::p(1.0));
  CHECK(evaluate(e.functional, vec({1, 1})) == Approx(2.0));
  CHECK(e.norm_on_subspace.value() == Approx(1.0));
  CHECK(e.dual_norm == Approx(1.0));
  // exhaustive check over the signed basis vectors (extreme points of the l1 ball)
  double sup = 0.0;
  for (int j = 0; j < 2; ++j) sup = std::max(sup, std::abs(e.functional.weights(j)));
  CHECK(sup == Approx(1.0));

  e = extend_functional<double>(span1(vec({1, 1})), vec({0}), NormSpec<double>::p(1.0));
  CHECK(e.functional.weights.isZero(0.0));
  CHECK_THROWS_AS(extend_functional<double>(span1(vec({1, 1})), vec({1, 2}), NormSpec<double>::p(1.0)),
                  PreconditionError);
  CHECK_THROWS_AS(extend_functional<double>(span1(vec({1, 1})), vec({1}),
                                            NormSpec<double>::custom([](const Eigen::VectorXd& v) {
                                              return v.norm();
                                            })),
                  PreconditionError);
}

TEST_CASE_TEMPLATE("extensions preserve values and norms", Scalar, double, Complex) {
  Rng rng(7);
  const std::vector<double> ps = {1.0, 2.0, HUGE_VAL, 1.5, 3.0};
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 2 + t % 4;
    const Eigen::Index k = 1 + (t / 4) % (n - 1);
    const double p = ps[static_cast<std::size_t>(t) % ps.size()];
    if constexpr (is_complex_v<Scalar>) {
      if (p == 1.0 || std::isinf(p)) continue;
    }
    const NormSpec<Scalar> norm = NormSpec<Scalar>::p(p);
    const Subspace<Scalar> z(random_matrix<Scalar>(n, k, rng));
    const Vec<Scalar> values = random_vector<Scalar>(k, rng);
    const auto e = extend_functional(z, values, norm);
    for (int s = 0; s < 5; ++s) {
      const Vec<Scalar> y = random_vector<Scalar>(k, rng);
      const Scalar expected = values.transpose() * y;
      CHECK(std::abs(evaluate(e.functional, Vec<Scalar>(z.basis() * y)) - expected) <=
            1e-7 * std::max(1.0, std::abs(expected)));
    }
    const double target = e.norm_on_subspace.value();
    CHECK(e.dual_norm == Approx(target).epsilon(1e-6));
    CHECK(e.dual_norm <= target * (1 + 1e-6));
    // nothing in Z beats the computed norm of lambda
    for (int s = 0; s < 100; ++s) {
      const Vec<Scalar> y = random_vector<Scalar>(k, rng);
      CHECK(std::abs(Scalar(values.transpose() * y)) <= e.norm_on_subspace.upper * norm(Vec<Scalar>(z.basis() * y)) +
                                                            1e-9);
    }
  }
}
