#pragma once

// Closed convex sets in R^n: Euclidean projection, separation and
// supporting hyperplanes.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "normkit/core.hpp"
#include "normkit/random.hpp"

namespace normkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace sets {

/// { x : <a, x> <= b }, a != 0.
struct Halfspace {
  Vector a;
  double b = 0.0;
};

/// offset + span(columns of basis). An empty basis is the single point.
struct AffineSubspace {
  Matrix basis;
  Vector offset;
};

struct Box {
  Vector lo;
  Vector hi;
};

struct PBall {
  Exponent p = Exponent(2.0);
  double radius = 1.0;
  Vector center;
};

struct Orthant {
  Eigen::Index dimension = 0;
};

/// Intersection of halfspaces with a certified feasible point.
struct Polytope {
  std::vector<Halfspace> halfspaces;
  Vector feasible_point;
};

/// Nonnegative combinations of the columns of `generators`.
struct GeneratedCone {
  Matrix generators;
};

}  // namespace sets

class ConvexSet;

namespace sets {
struct Intersection {
  std::vector<ConvexSet> parts;
};
}  // namespace sets

/// Tagged description of a nonempty closed convex set.
class ConvexSet {
 public:
  using Variant = std::variant<sets::Halfspace, sets::AffineSubspace, sets::Box, sets::PBall, sets::Orthant,
                               sets::Polytope, sets::GeneratedCone, sets::Intersection>;

  ConvexSet(sets::Halfspace s);
  ConvexSet(sets::AffineSubspace s);
  ConvexSet(sets::Box s);
  ConvexSet(sets::PBall s);
  ConvexSet(sets::Orthant s);
  ConvexSet(sets::Polytope s);
  ConvexSet(sets::GeneratedCone s);
  ConvexSet(sets::Intersection s);

  static ConvexSet halfspace(Vector a, double b) { return sets::Halfspace{std::move(a), b}; }
  static ConvexSet box(Vector lo, Vector hi) { return sets::Box{std::move(lo), std::move(hi)}; }
  static ConvexSet ball(Exponent p, double radius, Vector center) {
    return sets::PBall{p, radius, std::move(center)};
  }
  static ConvexSet unit_ball(Exponent p, Eigen::Index n) { return ball(p, 1.0, Vector::Zero(n)); }
  static ConvexSet orthant(Eigen::Index n) { return sets::Orthant{n}; }
  static ConvexSet cone(Matrix generators) { return sets::GeneratedCone{std::move(generators)}; }
  static ConvexSet point(Vector x) { return sets::AffineSubspace{Matrix(x.size(), 0), std::move(x)}; }

  const Variant& variant() const { return value_; }
  Eigen::Index dimension() const;
  std::string kind() const;
  bool is_cone() const;
  /// True when projection goes through an iterative backend.
  bool is_iterative() const;

 private:
  Variant value_;
};

struct Projection {
  Vector point;
  double distance = 0.0;
  int iterations = 0;
};

/// Euclidean nearest point. Closed forms for halfspaces, affine subspaces,
/// boxes, orthants and p-balls (sort-based for p = 1, a scalar root search
/// for 1 < p < inf other than 2); NNLS for generated cones; Dykstra's
/// alternating projections for polytopes and intersections.
Projection project(const ConvexSet& set, const Vector& point, const Tolerances& tol = {});

double distance(const ConvexSet& set, const Vector& point, const Tolerances& tol = {});

/// Membership up to eps_iter.
bool contains(const ConvexSet& set, const Vector& point, const Tolerances& tol = {});

/// { x : <x, normal> = offset } with a unit normal.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;

  double signed_distance(const Vector& x) const { return x.dot(normal) - offset; }
};

/// Hyperplane through the projection q of p, with normal (p - q)/|p - q|.
/// The set lies in { <x, normal> <= offset } and p strictly beyond it.
Hyperplane separate_point(const ConvexSet& set, const Vector& p, const Tolerances& tol = {});

/// Supporting hyperplane at a boundary point p, obtained as the limit of
/// separating normals of the exterior points p + 2^{-j} d. The returned
/// normal satisfies <x - p, normal> >= 0 on the set.
Hyperplane supporting_hyperplane(const ConvexSet& set, const Vector& p, const Vector& exterior_direction,
                                 int steps = 40, const Tolerances& tol = {});

struct ConeSeparation {
  Vector normal;      // v: unit, <v, x> >= 0 on the cone, <v, z> < 0
  Vector projection;  // q: nearest cone point to z, <v, q> = 0
  double distance = 0.0;
};

/// For z outside a closed convex cone: v = (q - z) / |q - z|.
ConeSeparation separate_cone(const ConvexSet& cone, const Vector& z, const Tolerances& tol = {});

/// Points of the set: projections of random Gaussian points (scaled around
/// the set) and random convex combinations of those.
std::vector<Vector> sample_members(const ConvexSet& set, int count, Rng& rng, const Tolerances& tol = {});

struct HullCheck {
  bool holds = true;
  int probes = 0;
  int members = 0;
  int violations = 0;
};

/// Samples exterior probes, separates each from the set, and checks that
/// the probe is cut off while every sampled member is kept.
HullCheck halfspace_hull_check(const ConvexSet& set, int probes, std::uint64_t seed, const Tolerances& tol = {});

/// Same as above for caller-chosen probe points (points inside the set are
/// skipped).
HullCheck halfspace_hull_check(const ConvexSet& set, const std::vector<Vector>& probes, std::uint64_t seed,
                               const Tolerances& tol = {});

}  // namespace normkit
