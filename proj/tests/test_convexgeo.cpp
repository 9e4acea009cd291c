#include "doctest.h"

#include <cmath>

#include "normkit/convexgeo.hpp"
#include "normkit/spaces.hpp"

using namespace normkit;
using doctest::Approx;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Nearest point of the set among a dense 2-D grid of members.
Vector grid_nearest(const ConvexSet& set, const Vector& p, double lo, double hi, int steps) {
  Vector best;
  double best_d = HUGE_VAL;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const Vector x = vec({lo + (hi - lo) * i / steps, lo + (hi - lo) * j / steps});
      if (!contains(set, x)) continue;
      const double d = (x - p).norm();
      if (d < best_d) {
        best_d = d;
        best = x;
      }
    }
  }
  return best;
}

/// Exact nearest point of a 2-D polytope: the best feasible candidate among
/// p itself, its projections onto each edge line, and pairwise vertices.
Vector polygon_nearest(const sets::Polytope& poly, const Vector& p) {
  auto feasible = [&](const Vector& x) {
    for (const auto& h : poly.halfspaces)
      if (h.a.dot(x) > h.b + 1e-9) return false;
    return true;
  };
  std::vector<Vector> candidates = {p};
  for (const auto& h : poly.halfspaces) candidates.push_back(p - (h.a.dot(p) - h.b) / h.a.squaredNorm() * h.a);
  for (std::size_t i = 0; i < poly.halfspaces.size(); ++i) {
    for (std::size_t j = i + 1; j < poly.halfspaces.size(); ++j) {
      Eigen::Matrix2d m;
      m.row(0) = poly.halfspaces[i].a.transpose();
      m.row(1) = poly.halfspaces[j].a.transpose();
      if (std::abs(m.determinant()) < 1e-12) continue;
      candidates.push_back(m.inverse() * Eigen::Vector2d(poly.halfspaces[i].b, poly.halfspaces[j].b));
    }
  }
  Vector best;
  double best_d = HUGE_VAL;
  for (const Vector& x : candidates) {
    if (feasible(x) && (x - p).norm() < best_d) {
      best_d = (x - p).norm();
      best = x;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("closed-form projections") {
  auto pr = project(ConvexSet::halfspace(vec({1, 0}), 0.0), vec({2, 3}));
  CHECK((pr.point - vec({0, 3})).norm() < 1e-12);
  CHECK(pr.distance == Approx(2.0));

  pr = project(ConvexSet::box(vec({0, 0}), vec({1, 1})), vec({2, -1}));
  CHECK((pr.point - vec({1, 0})).norm() < 1e-12);
  CHECK(pr.distance == Approx(std::sqrt(2.0)));

  pr = project(ConvexSet::unit_ball(Exponent(1.0), 2), vec({1, 1}));
  CHECK((pr.point - vec({0.5, 0.5})).norm() < 1e-12);
  CHECK(pr.distance == Approx(std::sqrt(2.0) / 2.0));
  const Vector oracle = grid_nearest(ConvexSet::unit_ball(Exponent(1.0), 2), vec({1, 1}), -1, 1, 400);
  CHECK((pr.point - oracle).norm() <= 2 * (2.0 / 400));
}

TEST_CASE("projection rejects malformed sets") {
  CHECK_THROWS_AS(ConvexSet::halfspace(vec({0, 0}), 1.0), PreconditionError);
  CHECK_THROWS_AS(ConvexSet::box(vec({1, 0}), vec({0, 1})), PreconditionError);
  CHECK_THROWS_AS(project(ConvexSet::unit_ball(Exponent(2.0), 2), vec({1, 2, 3})), PreconditionError);
}

TEST_CASE("projection properties on random sets") {
  Rng rng(2);
  std::vector<ConvexSet> sets = {
      ConvexSet::unit_ball(Exponent(1.0), 3),       ConvexSet::unit_ball(Exponent(2.0), 3),
      ConvexSet::ball(Exponent(3.0), 2.0, vec({1, 0, -1})), ConvexSet::unit_ball(Exponent::inf(), 3),
      ConvexSet::box(vec({-1, 0, 0}), vec({1, 2, 0.5})), ConvexSet::orthant(3),
      ConvexSet::cone(Matrix::Random(3, 4)),
  };
  sets::Polytope poly;
  poly.feasible_point = Vector::Zero(3);
  for (int k = 0; k < 6; ++k) poly.halfspaces.push_back(sets::Halfspace{random_vector<double>(3, rng), 1.0});
  sets.push_back(poly);

  for (const ConvexSet& set : sets) {
    const std::vector<Vector> members = sample_members(set, 50, rng);
    for (int t = 0; t < 30; ++t) {
      const Vector p = 3.0 * random_vector<double>(3, rng);
      const Vector y = 3.0 * random_vector<double>(3, rng);
      const Projection qp = project(set, p);
      const Projection qy = project(set, y);
      CHECK(contains(set, qp.point));
      CHECK((project(set, qp.point).point - qp.point).norm() <= 1e-7);
      CHECK((qp.point - qy.point).norm() <= (p - y).norm() + 1e-7);
      for (const Vector& x : members) CHECK((x - qp.point).dot(p - qp.point) <= 1e-7 * std::max(1.0, p.norm()));
    }
  }
}

TEST_CASE("polygon projection matches edge and vertex enumeration") {
  Rng rng(23);
  for (int t = 0; t < 2000; ++t) {
    sets::Polytope poly;
    poly.feasible_point = Vector::Zero(2);
    for (int k = 0; k < 3 + t % 4; ++k) poly.halfspaces.push_back({random_vector<double>(2, rng), 1.0});
    const Vector p = 3.0 * random_vector<double>(2, rng);
    const Projection q = project(ConvexSet(poly), p);
    CHECK((q.point - polygon_nearest(poly, p)).norm() < 1e-6);
  }
}

TEST_CASE("point separation") {
  Hyperplane h = separate_point(ConvexSet::unit_ball(Exponent(2.0), 2), vec({2, 0}));
  CHECK((h.normal - vec({1, 0})).norm() < 1e-12);
  CHECK(h.offset == Approx(1.0));

  h = separate_point(ConvexSet::orthant(2), vec({-1, -1}));
  CHECK((h.normal + vec({1, 1}) / std::sqrt(2.0)).norm() < 1e-12);
  CHECK(h.offset == Approx(0.0));

  CHECK_THROWS_WITH_AS(separate_point(ConvexSet::orthant(2), vec({1, 1})), doctest::Contains("no strict separation"),
                       PreconditionError);
}

TEST_CASE("separation from a polytope is checked on its vertices") {
  // triangle with vertices (0,0), (2,0), (0,1)
  sets::Polytope tri;
  tri.halfspaces = {{vec({-1, 0}), 0.0}, {vec({0, -1}), 0.0}, {vec({1, 2}), 2.0}};
  tri.feasible_point = vec({0.1, 0.1});
  const std::vector<Vector> vertices = {vec({0, 0}), vec({2, 0}), vec({0, 1})};
  Rng rng(6);
  int tested = 0;
  for (int t = 0; t < 200; ++t) {
    const Vector p = 4.0 * random_vector<double>(2, rng);
    if (distance(tri, p) <= 1e-3) continue;
    const Hyperplane h = separate_point(tri, p);
    CHECK(h.normal.norm() == Approx(1.0));
    CHECK(h.signed_distance(p) > 0.0);
    for (const Vector& v : vertices) CHECK(h.signed_distance(v) <= 1e-7);
    ++tested;
  }
  CHECK(tested > 100);
}

TEST_CASE("supporting hyperplanes") {
  Hyperplane h = supporting_hyperplane(ConvexSet::unit_ball(Exponent::inf(), 2), vec({1, 0.5}), vec({1, 0}));
  CHECK((h.normal - vec({-1, 0})).norm() < 1e-9);

  h = supporting_hyperplane(ConvexSet::unit_ball(Exponent(2.0), 2), vec({0, 1}), vec({0, 1}));
  CHECK((h.normal - vec({0, -1})).norm() < 1e-9);

  const ConvexSet square = ConvexSet::box(vec({0, 0}), vec({1, 1}));
  h = supporting_hyperplane(square, vec({1, 1}), vec({1, 1}));
  CHECK((h.normal + vec({1, 1}) / std::sqrt(2.0)).norm() < 1e-9);

  Rng rng(1);
  for (const Vector& x : sample_members(square, 500, rng)) CHECK((x - vec({1, 1})).dot(h.normal) >= -1e-7);

  CHECK_THROWS_AS(supporting_hyperplane(square, vec({1, 1}), vec({-1, -1})), PreconditionError);
  CHECK_THROWS_AS(supporting_hyperplane(square, vec({2, 2}), vec({1, 1})), PreconditionError);
}

TEST_CASE("supporting hyperplanes on a sampled ball boundary") {
  Rng rng(12);
  const ConvexSet ball = ConvexSet::unit_ball(Exponent(3.0), 3);
  const std::vector<Vector> members = sample_members(ball, 300, rng);
  for (int t = 0; t < 20; ++t) {
    Vector p = random_vector<double>(3, rng);
    p /= p_norm(p, 3.0);
    const Hyperplane h = supporting_hyperplane(ball, p, p);
    CHECK(h.normal.norm() == Approx(1.0));
    for (const Vector& x : members) CHECK((x - p).dot(h.normal) >= -1e-7);
  }
}

TEST_CASE("cone separation") {
  ConeSeparation s = separate_cone(ConvexSet::orthant(2), vec({-1, 1}));
  CHECK((s.projection - vec({0, 1})).norm() < 1e-12);
  CHECK((s.normal - vec({1, 0})).norm() < 1e-12);
  CHECK(s.normal.dot(vec({-1, 1})) == Approx(-1.0));

  Matrix ray(2, 1);
  ray << 1, 0;
  s = separate_cone(ConvexSet::cone(ray), vec({0, 1}));
  CHECK(s.projection.norm() < 1e-12);
  CHECK((s.normal - vec({0, -1})).norm() < 1e-12);
  CHECK(s.normal.dot(vec({0, 1})) == Approx(-1.0));

  CHECK_THROWS_WITH_AS(separate_cone(ConvexSet::orthant(2), vec({1, 1})), doctest::Contains("no separation exists"),
                       PreconditionError);

  Rng rng(3);
  const ConvexSet cone = ConvexSet::cone(Matrix::Random(3, 3));
  const std::vector<Vector> members = sample_members(cone, 200, rng);
  for (int t = 0; t < 100; ++t) {
    const Vector z = random_vector<double>(3, rng);
    if (contains(cone, z)) continue;
    const ConeSeparation c = separate_cone(cone, z);
    CHECK(c.normal.norm() == Approx(1.0));
    CHECK(std::abs(c.normal.dot(c.projection)) <= 1e-8);
    CHECK(c.normal.dot(z) == Approx(-(z - c.projection).norm()).epsilon(1e-8));
    for (const Vector& x : members) CHECK(c.normal.dot(x) >= -1e-7 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("sets are intersections of their halfspaces") {
  CHECK(halfspace_hull_check(ConvexSet::unit_ball(Exponent(2.0), 2), 100, 1).holds);
  const std::vector<Vector> sides = {vec({2, 0.5}), vec({-1, 0.5}), vec({0.5, 2}), vec({0.5, -1})};
  CHECK(halfspace_hull_check(ConvexSet::box(vec({0, 0}), vec({1, 1})), sides, 1).holds);
  CHECK(halfspace_hull_check(ConvexSet::point(Vector::Zero(2)), 50, 2).holds);
}
