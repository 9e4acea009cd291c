#include "doctest.h"

#include "normkit/cones.hpp"
#include "normkit/random.hpp"

using namespace normkit;
using doctest::Approx;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Matrix diag(std::initializer_list<double> xs) { return vec(xs).asDiagonal(); }

}  // namespace

TEST_CASE("dual cone membership") {
  const ConvexSet orthant = ConvexSet::orthant(2);
  CHECK(dual_cone_membership(orthant, vec({1, 2})));
  CHECK_FALSE(dual_cone_membership(orthant, vec({1, -0.1})));
  CHECK(dual_cone_membership(PsdCone{3}, SelfAdjointMap<double>(Matrix::Identity(3, 3))));
  CHECK_THROWS_AS(dual_cone_membership(orthant, vec({1, 2, 3})), PreconditionError);
  CHECK_THROWS_AS(dual_cone_membership(ConvexSet::unit_ball(Exponent(2.0), 2), vec({1, 2})), PreconditionError);

  Matrix g(2, 2);
  g << 1, 1, 0, 1;  // generators (1,0) and (1,1)
  const ConvexSet cone = ConvexSet::cone(g);
  CHECK(dual_cone_membership(cone, vec({0, 1})));
  CHECK(dual_cone_membership(cone, vec({1, -1})));
  CHECK_FALSE(dual_cone_membership(cone, vec({-1, 0.5})));
}

TEST_CASE("orthant self-duality and the dual cone is a cone") {
  Rng rng(1);
  const ConvexSet orthant = ConvexSet::orthant(4);
  const ConvexSet cone = ConvexSet::cone(Matrix::Random(4, 5));
  for (int t = 0; t < 500; ++t) {
    const Vector w = random_vector<double>(4, rng);
    CHECK(dual_cone_membership(orthant, w) == (w.array() >= 0.0).all());
    const Vector a = random_vector<double>(4, rng);
    const Vector b = random_vector<double>(4, rng);
    if (dual_cone_membership(cone, a) && dual_cone_membership(cone, b)) {
      CHECK(dual_cone_membership(cone, Vector(a + b)));
      CHECK(dual_cone_membership(cone, Vector(3.7 * a)));
    }
  }
}

TEST_CASE("trace pairing") {
  CHECK(trace_pairing(SelfAdjointMap<double>(Matrix::Identity(2, 2)), SelfAdjointMap<double>(diag({1, 2}))) ==
        Approx(3.0));
  CHECK(trace_pairing(SelfAdjointMap<double>(diag({1, -1})), SelfAdjointMap<double>(diag({0, 1}))) == Approx(-1.0));
  Matrix bad(2, 2);
  bad << 1, 2, 0, 1;
  CHECK_THROWS_AS(SelfAdjointMap<double>{bad}, PreconditionError);

  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Mat<Complex> tm = random_hermitian<Complex>(4, rng);
    const Mat<Complex> am = random_hermitian<Complex>(4, rng);
    Complex sum = 0.0;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) sum += am(j, k) * tm(k, j);
    const SelfAdjointMap<Complex> T(tm), A(am);
    CHECK(trace_pairing(T, A) == Approx(sum.real()).epsilon(1e-12));
    CHECK(std::abs(sum.imag()) <= 1e-9 * std::abs(sum));
    CHECK(trace_pairing(T, A) == Approx(trace_pairing(A, T)).epsilon(1e-12));
  }
}

TEST_CASE("PSD duality on fixed matrices") {
  auto r = psd_duality_check(SelfAdjointMap<double>(diag({2, 3})), 20, 1);
  CHECK(r.is_psd);
  CHECK(r.pairing_nonneg);
  CHECK_FALSE(r.witness);

  r = psd_duality_check(SelfAdjointMap<double>(diag({1, -1})), 20, 1);
  CHECK_FALSE(r.is_psd);
  CHECK_FALSE(r.pairing_nonneg);
  REQUIRE(r.witness);
  CHECK((r.witness->cwiseAbs() - diag({0, 1})).norm() < 1e-12);
  CHECK(r.witness_pairing == Approx(-1.0));
}

TEST_CASE_TEMPLATE("PSD duality biconditional on random Hermitian matrices", Scalar, double, Complex) {
  Rng rng(17);
  int negatives = 0;
  for (int t = 0; t < 300; ++t) {
    const Eigen::Index n = 1 + t % 6;
    Mat<Scalar> m;
    if (t % 3 == 0) {
      const Mat<Scalar> b = random_matrix<Scalar>(n, n, rng);
      m = b * b.adjoint();
    } else {
      m = random_hermitian<Scalar>(n, rng);
    }
    const auto r = psd_duality_check(SelfAdjointMap<Scalar>(m), 20, static_cast<std::uint64_t>(t));
    REQUIRE(r.is_psd == r.pairing_nonneg);
    if (t % 3 == 0) CHECK(r.is_psd);
    if (!r.is_psd) {
      ++negatives;
      REQUIRE(r.witness);
      const Mat<Scalar> w = *r.witness;
      CHECK(std::abs(Eigen::numext::real(w.trace()) - 1.0) < 1e-12);
      CHECK(trace_pairing(SelfAdjointMap<Scalar>(m), SelfAdjointMap<Scalar>(w)) < 0.0);
    }
  }
  CHECK(negatives > 50);
}

TEST_CASE("bidual") {
  CHECK(bidual_check(ConvexSet::orthant(3), 200, 1).holds);
  Matrix g(2, 2);
  g << 1, 1, 0, 1;
  const ConvexSet cone = ConvexSet::cone(g);
  CHECK(bidual_check(cone, 200, 2).holds);
  const auto sep = bidual_separator(cone, vec({0, -1}));
  REQUIRE(sep);
  CHECK(sep->dot(vec({0, -1})) < 0.0);
  CHECK(dual_cone_membership(cone, *sep));
  CHECK_FALSE(bidual_separator(cone, vec({1, 1})));
}
