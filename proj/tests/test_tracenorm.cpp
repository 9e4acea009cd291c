#include "doctest.h"

#include <cmath>

#include "normkit/random.hpp"
#include "normkit/tracenorm.hpp"

using namespace normkit;
using doctest::Approx;

namespace {

Eigen::MatrixXd diag(double a, double b) { return Eigen::Vector2d(a, b).asDiagonal(); }

RankOneTerm<double> term(Eigen::VectorXd lambda, Eigen::VectorXd w) {
  return RankOneTerm<double>{Functional<double>{std::move(lambda)}, std::move(w)};
}

/// Cheapest l2 cost of T = U0 M (M^{-1} L0^T) over invertible 2x2 M, by
/// random restarts and compass search on the entries of M.
double brute_force_two_terms(const Eigen::MatrixXd& u0, const Eigen::MatrixXd& l0, Rng& rng) {
  auto cost = [&](const Eigen::Matrix2d& m) {
    if (std::abs(m.determinant()) < 1e-8) return HUGE_VAL;
    const Eigen::MatrixXd w = u0 * m;
    const Eigen::MatrixXd l = l0 * m.inverse().transpose();
    return w.col(0).norm() * l.col(0).norm() + w.col(1).norm() * l.col(1).norm();
  };
  double best = HUGE_VAL;
  for (int restart = 0; restart < 20; ++restart) {
    Eigen::Matrix2d m = random_matrix<double>(2, 2, rng);
    double value = cost(m);
    for (double step = 0.5; step > 1e-10;) {
      bool improved = false;
      for (int i = 0; i < 4; ++i) {
        for (double s : {step, -step}) {
          Eigen::Matrix2d trial = m;
          trial(i / 2, i % 2) += s;
          const double c = cost(trial);
          if (c < value) {
            value = c;
            m = trial;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::min(best, value);
  }
  return best;
}

}  // namespace

TEST_CASE("decomposition costs") {
  RankOneDecomposition<double> d;
  d.terms = {term(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 2))};
  const auto l2 = NormSpec<double>::p(2.0);
  CHECK(decomposition_cost(d, l2, l2) == Approx(2.0));

  RankOneDecomposition<double> id;
  id.terms = {term(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0)), term(Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 1))};
  CHECK(decomposition_cost(LinearMap<double>{Eigen::MatrixXd::Identity(2, 2)}, id) == Approx(2.0));

  const double a = 0.7;
  const Eigen::Vector2d r1(std::cos(a), std::sin(a)), r2(-std::sin(a), std::cos(a));
  RankOneDecomposition<double> rotated;
  rotated.terms = {term(r1, r1), term(r2, r2)};
  CHECK(decomposition_cost(LinearMap<double>{Eigen::MatrixXd::Identity(2, 2)}, rotated) == Approx(2.0));

  CHECK_THROWS_AS(decomposition_cost(LinearMap<double>{diag(3, 4)}, id), PreconditionError);

  // zero terms are dropped
  RankOneDecomposition<double> padded = d;
  padded.terms.push_back(term(Eigen::Vector2d::Zero(), Eigen::Vector2d(5, 5)));
  CHECK(decomposition_cost(padded, l2, l2) == Approx(2.0));
}

TEST_CASE("trace norms with closed forms") {
  auto t = trace_norm(LinearMap<double>{diag(3, 4)});
  CHECK(t.value.exact);
  CHECK(t.value.value() == Approx(7.0));
  CHECK((reconstruct(t.decomposition, 2, 2) - diag(3, 4)).norm() < 1e-12);

  t = trace_norm(LinearMap<double>{Eigen::MatrixXd::Zero(3, 2), NormSpec<double>::p(1.5), NormSpec<double>::inf()});
  CHECK(t.value.exact);
  CHECK(t.value.value() == 0.0);
}

TEST_CASE_TEMPLATE("rank-one maps have exact trace norms in any p-norms", Scalar, double, Complex) {
  Rng rng(5);
  const std::vector<double> ps = {1.0, 1.5, 2.0, 3.0, HUGE_VAL};
  for (int t = 0; t < 40; ++t) {
    const NormSpec<Scalar> dom = NormSpec<Scalar>::p(ps[static_cast<std::size_t>(t) % 5]);
    const NormSpec<Scalar> cod = NormSpec<Scalar>::p(ps[static_cast<std::size_t>(t / 5) % 5]);
    const Vec<Scalar> lam = random_vector<Scalar>(3, rng);
    const Vec<Scalar> w = random_vector<Scalar>(2, rng);
    const LinearMap<Scalar> map{rank_one_matrix(lam, w), dom, cod};
    const auto tn = trace_norm(map);
    const double expected = (*dom.dual())(lam)*cod(w);
    CHECK(tn.value.upper == Approx(expected).epsilon(1e-9));
    CHECK(tn.value.lower == Approx(expected).epsilon(1e-7));
    CHECK(op_le_trace_check(map));
    CHECK(operator_norm(map).lower == Approx(tn.value.upper).epsilon(1e-7));
  }
}

TEST_CASE("l2 trace norm matches brute-force two-term decompositions") {
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const Eigen::MatrixXd u0 = random_matrix<double>(3, 2, rng);
    const Eigen::MatrixXd l0 = random_matrix<double>(4, 2, rng);
    const Eigen::MatrixXd m = u0 * l0.transpose();
    const auto tn = trace_norm(LinearMap<double>{m});
    CHECK(tn.value.exact);
    CHECK(tn.value.value() == Approx(brute_force_two_terms(u0, l0, rng)).epsilon(1e-4));
  }
}

TEST_CASE("pairing bound") {
  auto r = pairing_bound_check(LinearMap<double>{diag(3, 4)}, LinearMap<double>{diag(3, 4)});
  CHECK(r.lhs == Approx(25.0));
  CHECK(r.rhs == Approx(28.0));
  CHECK(r.holds);
  r = pairing_bound_check(LinearMap<double>{Eigen::MatrixXd::Identity(2, 2)},
                          LinearMap<double>{Eigen::MatrixXd::Identity(2, 2)});
  CHECK(r.lhs == Approx(2.0));
  CHECK(r.rhs == Approx(2.0));
  CHECK(r.holds);
  CHECK_THROWS_AS(pairing_bound_check(LinearMap<double>{Eigen::MatrixXd::Identity(2, 2), NormSpec<double>::p(1.0)},
                                      LinearMap<double>{Eigen::MatrixXd::Identity(2, 2)}),
                  PreconditionError);
}

TEST_CASE_TEMPLATE("trace norm intervals are sound", Scalar, double, Complex) {
  Rng rng(19);
  const std::vector<std::pair<double, double>> pairs = {{1.0, 2.0}, {2.0, HUGE_VAL}, {1.5, 3.0}, {HUGE_VAL, 1.0},
                                                        {2.0, 2.0}};
  for (int t = 0; t < 60; ++t) {
    const auto [p, q] = pairs[static_cast<std::size_t>(t) % pairs.size()];
    const LinearMap<Scalar> map{random_matrix<Scalar>(3, 3, rng), NormSpec<Scalar>::p(p), NormSpec<Scalar>::p(q)};
    const auto tn = trace_norm(map);
    CHECK(tn.value.lower <= tn.value.upper);
    CHECK(op_le_trace_check(map));
    CHECK(decomposition_cost(map, tn.decomposition) == Approx(tn.value.upper).epsilon(1e-9));

    // a random decomposition costs at least the lower end
    RankOneDecomposition<Scalar> d;
    const Mat<Scalar> g = random_matrix<Scalar>(3, 3, rng);
    const Mat<Scalar> rest = map.matrix * g.inverse();
    for (Eigen::Index j = 0; j < 3; ++j)
      d.terms.push_back({Functional<Scalar>{Vec<Scalar>(g.row(j).transpose()), map.domain}, rest.col(j)});
    CHECK(decomposition_cost(map, d) >= tn.value.lower - 1e-7);

    // pairing bound with A running backwards
    const LinearMap<Scalar> a{random_matrix<Scalar>(3, 3, rng), map.codomain, map.domain};
    CHECK(pairing_bound_check(a, map).holds);
  }
}

TEST_CASE("l2 trace norm is a norm and its singular probe attains it") {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const Mat<Complex> x = random_matrix<Complex>(3, 4, rng);
    const Mat<Complex> y = random_matrix<Complex>(3, 4, rng);
    const Complex alpha = random_scalar<Complex>(rng);
    const double tx = trace_norm(LinearMap<Complex>{x}).value.value();
    CHECK(trace_norm(LinearMap<Complex>{Mat<Complex>(alpha * x)}).value.value() ==
          Approx(std::abs(alpha) * tx).epsilon(1e-7));
    CHECK(trace_norm(LinearMap<Complex>{Mat<Complex>(x + y)}).value.value() <=
          tx + trace_norm(LinearMap<Complex>{y}).value.value() + 1e-7);

    const auto tn = trace_norm(LinearMap<Complex>{x});
    REQUIRE(tn.probe);
    const auto r = pairing_bound_check(LinearMap<Complex>{*tn.probe}, LinearMap<Complex>{x});
    CHECK(r.lhs == Approx(r.rhs).epsilon(1e-7));
  }
}
