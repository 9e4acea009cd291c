#include "normkit/convexgeo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "normkit/linalg.hpp"
#include "normkit/spaces.hpp"

namespace normkit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kMachinePrecision = 4e-16;

void validate(const sets::Halfspace& s) {
  require(s.a.size() > 0, "halfspace: empty normal");
  require(s.a.norm() > 0.0, "halfspace: normal must be nonzero");
}

void validate(const sets::AffineSubspace& s) {
  require(s.offset.size() > 0, "affine subspace: empty offset");
  require(s.basis.rows() == s.offset.size(), "affine subspace: basis and offset dimensions differ");
}

void validate(const sets::Box& s) {
  require(s.lo.size() > 0 && s.lo.size() == s.hi.size(), "box: bound dimensions differ");
  require((s.lo.array() <= s.hi.array()).all(), "box: need lo <= hi componentwise (empty box)");
}

void validate(const sets::PBall& s) {
  require(s.center.size() > 0, "ball: empty center");
  require(s.radius >= 0.0 && std::isfinite(s.radius), "ball: radius must be finite and nonnegative");
}

void validate(const sets::Orthant& s) { require(s.dimension >= 1, "orthant: dimension must be positive"); }

void validate(const sets::Polytope& s) {
  require(s.feasible_point.size() > 0, "polytope: a feasible point is required");
  for (const auto& h : s.halfspaces) {
    validate(h);
    require(h.a.size() == s.feasible_point.size(), "polytope: halfspace dimension mismatch");
    const double slack = 1e-9 * std::max(1.0, std::abs(h.b) + h.a.norm() * s.feasible_point.norm());
    require(h.a.dot(s.feasible_point) <= h.b + slack, "polytope: infeasible (feasible point violates a halfspace)");
  }
}

void validate(const sets::GeneratedCone& s) {
  require(s.generators.rows() > 0 && s.generators.cols() > 0, "cone: at least one generator is required");
}

void validate(const sets::Intersection& s) {
  require(!s.parts.empty(), "intersection: no parts");
  for (const auto& part : s.parts)
    require(part.dimension() == s.parts.front().dimension(), "intersection: dimension mismatch");
}

Vector project_halfspace(const sets::Halfspace& h, const Vector& x) {
  const double excess = h.a.dot(x) - h.b;
  if (excess <= 0.0) return x;
  return x - (excess / h.a.squaredNorm()) * h.a;
}

Vector project_l1_ball(const Vector& y, double radius) {
  const Vector mag = y.cwiseAbs();
  if (mag.sum() <= radius) return y;
  if (radius == 0.0) return Vector::Zero(y.size());
  std::vector<double> sorted(mag.data(), mag.data() + mag.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - radius) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) threshold = candidate;
  }
  Vector out(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double s = std::max(mag(j) - threshold, 0.0);
    out(j) = y(j) < 0.0 ? -s : s;
  }
  return out;
}

/// Projection onto the l_p ball for 1 < p < inf. The minimizer has
/// x_j = sign(y_j) s_j with s_j + mu p s_j^{p-1} = |y_j|; mu is found by
/// bisection so that |s|_p = radius.
Vector project_lp_ball(const Vector& y, double p, double radius) {
  if (p_norm(y, p) <= radius) return y;
  if (radius == 0.0) return Vector::Zero(y.size());
  const Vector mag = y.cwiseAbs();
  auto shrink = [&](double mu) {
    Vector s(mag.size());
    for (Eigen::Index j = 0; j < mag.size(); ++j) {
      double lo = 0.0;
      double hi = mag(j);
      for (int it = 0; it < 200 && hi - lo > kMachinePrecision * mag(j); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid + mu * p * std::pow(mid, p - 1.0) > mag(j)) hi = mid;
        else lo = mid;
      }
      s(j) = 0.5 * (lo + hi);
    }
    return s;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (p_norm(shrink(hi), p) > radius) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > kMachinePrecision * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (p_norm(shrink(mid), p) > radius) lo = mid;
    else hi = mid;
  }
  const Vector s = shrink(hi);
  Vector out(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) out(j) = y(j) < 0.0 ? -s(j) : s(j);
  return out;
}

Vector project_ball(const sets::PBall& b, const Vector& x) {
  require(x.size() == b.center.size(), "project: dimension mismatch");
  const Vector y = x - b.center;
  Vector z;
  if (b.p.is_inf()) {
    z = y.cwiseMax(-b.radius).cwiseMin(b.radius);
  } else if (b.p.is(1.0)) {
    z = project_l1_ball(y, b.radius);
  } else if (b.p.is(2.0)) {
    const double r = y.norm();
    z = r <= b.radius ? y : Vector(y * (b.radius / r));
  } else {
    z = project_lp_ball(y, b.p.value(), b.radius);
  }
  return b.center + z;
}

/// Exact projection onto a polytope once Dykstra has singled out the active
/// halfspaces (those with a nonzero increment): project onto their common
/// boundary, then accept only if the KKT conditions hold.
std::optional<Vector> polish_polytope(const sets::Polytope& poly, const Vector& p,
                                      const std::vector<Vector>& increments) {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < increments.size(); ++i)
    if (increments[i].squaredNorm() > 0.0) active.push_back(i);
  const Eigen::Index k = static_cast<Eigen::Index>(active.size());
  Matrix a(k, p.size());
  Vector b(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    a.row(r) = poly.halfspaces[active[static_cast<std::size_t>(r)]].a.transpose();
    b(r) = poly.halfspaces[active[static_cast<std::size_t>(r)]].b;
  }
  Vector x = p;
  if (k > 0) {
    const Eigen::FullPivLU<Matrix> lu(a * a.transpose());
    if (!lu.isInvertible()) return std::nullopt;
    const Vector multipliers = lu.solve(Vector(a * p - b));
    if ((multipliers.array() < 0.0).any()) return std::nullopt;
    x = p - a.transpose() * multipliers;
  }
  for (const auto& h : poly.halfspaces)
    if (h.a.dot(x) - h.b > 1e-12 * std::max(1.0, h.a.norm() * x.norm())) return std::nullopt;
  return x;
}

/// Dykstra's alternating projections onto an intersection.
using Polish = std::function<std::optional<Vector>(const std::vector<Vector>&)>;

Projection dykstra(const std::vector<std::function<Vector(const Vector&)>>& parts, const Vector& start,
                   const Tolerances& tol, const Polish& polish = nullptr) {
  Vector x = start;
  std::vector<Vector> increments(parts.size(), Vector::Zero(start.size()));
  const double stop = 1e-3 * tol.eps_iter * std::max(1.0, start.norm());
  for (int it = 1; it <= tol.max_iter; ++it) {
    const Vector previous = x;
    double moved = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Vector z = x + increments[i];
      x = parts[i](z);
      // the iterate can stall for a sweep while the increments still move
      moved = std::max(moved, (z - x - increments[i]).norm());
      increments[i] = z - x;
    }
    if (polish && it % 16 == 0) {
      if (const auto exact = polish(increments)) return Projection{*exact, (start - *exact).norm(), it};
    }
    if ((x - previous).norm() <= stop && moved <= stop) {
      double violation = 0.0;
      for (const auto& part : parts) violation = std::max(violation, (part(x) - x).norm());
      if (violation <= stop) return Projection{x, (start - x).norm(), it};
    }
  }
  // Distance bracket: the last iterate bounds it from above once it is
  // feasible; nothing better than 0 is known from below.
  double violation = 0.0;
  for (const auto& part : parts) violation = std::max(violation, (part(x) - x).norm());
  const double upper = violation <= tol.eps_iter ? (start - x).norm() : std::numeric_limits<double>::infinity();
  throw ConvergenceError("alternating projections did not converge within max_iter", 0.0, upper);
}

}  // namespace

ConvexSet::ConvexSet(sets::Halfspace s) : value_(std::move(s)) { validate(std::get<sets::Halfspace>(value_)); }
ConvexSet::ConvexSet(sets::AffineSubspace s) : value_(std::move(s)) {
  validate(std::get<sets::AffineSubspace>(value_));
}
ConvexSet::ConvexSet(sets::Box s) : value_(std::move(s)) { validate(std::get<sets::Box>(value_)); }
ConvexSet::ConvexSet(sets::PBall s) : value_(std::move(s)) { validate(std::get<sets::PBall>(value_)); }
ConvexSet::ConvexSet(sets::Orthant s) : value_(std::move(s)) { validate(std::get<sets::Orthant>(value_)); }
ConvexSet::ConvexSet(sets::Polytope s) : value_(std::move(s)) { validate(std::get<sets::Polytope>(value_)); }
ConvexSet::ConvexSet(sets::GeneratedCone s) : value_(std::move(s)) {
  validate(std::get<sets::GeneratedCone>(value_));
}
ConvexSet::ConvexSet(sets::Intersection s) : value_(std::move(s)) {
  validate(std::get<sets::Intersection>(value_));
}

Eigen::Index ConvexSet::dimension() const {
  return std::visit(Overloaded{
                        [](const sets::Halfspace& s) { return s.a.size(); },
                        [](const sets::AffineSubspace& s) { return s.offset.size(); },
                        [](const sets::Box& s) { return s.lo.size(); },
                        [](const sets::PBall& s) { return s.center.size(); },
                        [](const sets::Orthant& s) { return s.dimension; },
                        [](const sets::Polytope& s) { return s.feasible_point.size(); },
                        [](const sets::GeneratedCone& s) { return s.generators.rows(); },
                        [](const sets::Intersection& s) { return s.parts.front().dimension(); },
                    },
                    value_);
}

std::string ConvexSet::kind() const {
  return std::visit(Overloaded{
                        [](const sets::Halfspace&) { return std::string("halfspace"); },
                        [](const sets::AffineSubspace&) { return std::string("affine"); },
                        [](const sets::Box&) { return std::string("box"); },
                        [](const sets::PBall&) { return std::string("pball"); },
                        [](const sets::Orthant&) { return std::string("orthant"); },
                        [](const sets::Polytope&) { return std::string("polytope"); },
                        [](const sets::GeneratedCone&) { return std::string("cone"); },
                        [](const sets::Intersection&) { return std::string("intersection"); },
                    },
                    value_);
}

bool ConvexSet::is_cone() const {
  return std::holds_alternative<sets::Orthant>(value_) || std::holds_alternative<sets::GeneratedCone>(value_);
}

bool ConvexSet::is_iterative() const {
  return std::holds_alternative<sets::Polytope>(value_) || std::holds_alternative<sets::Intersection>(value_);
}

Projection project(const ConvexSet& set, const Vector& point, const Tolerances& tol) {
  require(point.size() == set.dimension(), "project: dimension mismatch");
  auto closed = [&](Vector q) { return Projection{q, (point - q).norm(), 0}; };
  return std::visit(
      Overloaded{
          [&](const sets::Halfspace& h) { return closed(project_halfspace(h, point)); },
          [&](const sets::AffineSubspace& s) {
            if (s.basis.cols() == 0) return closed(s.offset);
            const Vector c = s.basis.colPivHouseholderQr().solve(Vector(point - s.offset));
            return closed(s.offset + s.basis * c);
          },
          [&](const sets::Box& b) { return closed(point.cwiseMax(b.lo).cwiseMin(b.hi)); },
          [&](const sets::PBall& b) { return closed(project_ball(b, point)); },
          [&](const sets::Orthant&) { return closed(point.cwiseMax(0.0)); },
          [&](const sets::Polytope& poly) {
            if (poly.halfspaces.empty()) return closed(point);
            std::vector<std::function<Vector(const Vector&)>> parts;
            for (const auto& h : poly.halfspaces) parts.push_back([&h](const Vector& x) { return project_halfspace(h, x); });
            return dykstra(parts, point, tol, [&](const std::vector<Vector>& increments) {
              return polish_polytope(poly, point, increments);
            });
          },
          [&](const sets::GeneratedCone& c) {
            const NnlsResult r = nnls(c.generators, point, tol.max_iter);
            if (!r.converged) {
              const double d = (point - c.generators * r.coefficients).norm();
              throw ConvergenceError("cone projection (NNLS) did not converge within max_iter", 0.0, d);
            }
            Projection out = closed(c.generators * r.coefficients);
            out.iterations = r.iterations;
            return out;
          },
          [&](const sets::Intersection& in) {
            std::vector<std::function<Vector(const Vector&)>> parts;
            for (const auto& part : in.parts)
              parts.push_back([&part, &tol](const Vector& x) { return project(part, x, tol).point; });
            return dykstra(parts, point, tol);
          },
      },
      set.variant());
}

double distance(const ConvexSet& set, const Vector& point, const Tolerances& tol) {
  return project(set, point, tol).distance;
}

bool contains(const ConvexSet& set, const Vector& point, const Tolerances& tol) {
  return distance(set, point, tol) <= tol.eps_iter;
}

Hyperplane separate_point(const ConvexSet& set, const Vector& p, const Tolerances& tol) {
  const Projection proj = project(set, p, tol);
  if (proj.distance <= tol.eps_iter)
    throw PreconditionError("no strict separation: the point lies within eps_iter of the set");
  Hyperplane h;
  h.normal = (p - proj.point) / proj.distance;
  h.offset = h.normal.dot(proj.point);
  return h;
}

Hyperplane supporting_hyperplane(const ConvexSet& set, const Vector& p, const Vector& exterior_direction, int steps,
                                 const Tolerances& tol) {
  require(steps >= 1, "supporting_hyperplane: steps must be at least 1");
  require(p.size() == set.dimension() && exterior_direction.size() == p.size(),
          "supporting_hyperplane: dimension mismatch");
  require(exterior_direction.norm() > 0.0, "supporting_hyperplane: exterior direction must be nonzero");
  require(contains(set, p, tol), "supporting_hyperplane: p is not in the set");
  require(distance(set, Vector(p + 0.5 * exterior_direction), tol) > tol.eps_iter,
          "supporting_hyperplane: direction is not exterior at p");

  // Each exterior point p_j yields the exact supporting normal at its
  // projection q_j. That normal supports the set at p up to |q_j - p|, and
  // its direction is resolved up to precision / |p_j - q_j|; keep the j with
  // the smallest combined error.
  const double scale = std::max(1.0, p.norm());
  const double precision = set.is_iterative() ? 1e-3 * tol.eps_iter * scale : kMachinePrecision * scale;
  Vector normal = -exterior_direction.normalized();
  double best_error = std::numeric_limits<double>::infinity();
  double step = 1.0;
  for (int j = 1; j <= steps; ++j) {
    step *= 0.5;
    const Vector pj = p + step * exterior_direction;
    const Projection proj = project(set, pj, tol);
    const double gap = proj.distance;
    if (gap <= precision) continue;
    const double error = (proj.point - p).norm() + precision / gap;
    if (error < best_error) {
      best_error = error;
      normal = (proj.point - pj) / gap;
    }
  }
  return Hyperplane{normal, normal.dot(p)};
}

ConeSeparation separate_cone(const ConvexSet& cone, const Vector& z, const Tolerances& tol) {
  require(cone.is_cone(), "separate_cone: set must be an orthant or a generated cone");
  const Projection proj = project(cone, z, tol);
  if (proj.distance <= tol.eps_iter) throw PreconditionError("no separation exists: z lies in the cone");
  ConeSeparation out;
  out.projection = proj.point;
  out.distance = proj.distance;
  out.normal = (proj.point - z) / proj.distance;
  return out;
}

std::vector<Vector> sample_members(const ConvexSet& set, int count, Rng& rng, const Tolerances& tol) {
  const Eigen::Index n = set.dimension();
  const Vector anchor = project(set, Vector::Zero(n), tol).point;
  const double scale = 1.0 + anchor.norm();
  std::vector<Vector> members;
  const int projected = std::max(1, count / 2);
  for (int k = 0; k < projected; ++k) {
    const Vector y = anchor + 2.0 * scale * random_vector<double>(n, rng);
    members.push_back(project(set, y, tol).point);
  }
  while (static_cast<int>(members.size()) < count) {
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(projected - 1));
    const double t = uniform01(rng);
    members.push_back(t * members[pick(rng)] + (1.0 - t) * members[pick(rng)]);
  }
  return members;
}

HullCheck halfspace_hull_check(const ConvexSet& set, const std::vector<Vector>& probes, std::uint64_t seed,
                               const Tolerances& tol) {
  Rng rng(seed);
  const std::vector<Vector> members = sample_members(set, 200, rng, tol);
  HullCheck out;
  out.members = static_cast<int>(members.size());
  for (const Vector& y : probes) {
    if (contains(set, y, tol)) continue;
    ++out.probes;
    const Hyperplane h = separate_point(set, y, tol);
    bool ok = h.signed_distance(y) > 0.0;
    for (const Vector& x : members) ok = ok && h.signed_distance(x) <= tol.eps_iter * std::max(1.0, x.norm());
    if (!ok) {
      ++out.violations;
      out.holds = false;
    }
  }
  return out;
}

HullCheck halfspace_hull_check(const ConvexSet& set, int probes, std::uint64_t seed, const Tolerances& tol) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Eigen::Index n = set.dimension();
  const Vector anchor = project(set, Vector::Zero(n), tol).point;
  const double scale = 1.0 + anchor.norm();
  std::vector<Vector> points;
  for (int attempts = 0; static_cast<int>(points.size()) < probes && attempts < 50 * probes; ++attempts) {
    Vector y = anchor + 3.0 * scale * random_vector<double>(n, rng);
    if (!contains(set, y, tol)) points.push_back(std::move(y));
  }
  return halfspace_hull_check(set, points, seed, tol);
}

}  // namespace normkit
