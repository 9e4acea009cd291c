#include "normkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "normkit/random.hpp"

namespace normkit {

namespace {

template <class Scalar>
Scalar conj_of(Scalar x) {
  return Eigen::numext::conj(x);
}

}  // namespace

template <class Scalar>
HermitianEigen<Scalar> jacobi_eigen(const Mat<Scalar>& input, double tol, int max_sweeps) {
  require(input.rows() == input.cols(), "jacobi_eigen: matrix must be square");
  const Eigen::Index n = input.rows();
  Mat<Scalar> a = (input + input.adjoint()) / 2.0;
  Mat<Scalar> v = Mat<Scalar>::Identity(n, n);
  HermitianEigen<Scalar> out;

  const double scale = a.norm();
  auto off_diagonal = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (out.sweeps = 0; out.sweeps < max_sweeps; ++out.sweeps) {
    if (off_diagonal() <= tol * scale) {
      out.converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const double app = Eigen::numext::real(a(p, p));
        const double aqq = Eigen::numext::real(a(q, q));
        const Scalar phase = apq / r;

        // Phase rotation makes the (p, q) entry real, then a real Jacobi
        // rotation annihilates it.
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Scalar j00 = c;
        const Scalar j01 = s;
        const Scalar j10 = -s * conj_of(phase);
        const Scalar j11 = c * conj_of(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = akp * j00 + akq * j10;
          a(k, q) = akp * j01 + akq * j11;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = conj_of(j00) * apk + conj_of(j10) * aqk;
          a(q, k) = conj_of(j01) * apk + conj_of(j11) * aqk;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = Eigen::numext::real(a(p, p));
        a(q, q) = Eigen::numext::real(a(q, q));
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = vkp * j00 + vkq * j10;
          v(k, q) = vkp * j01 + vkq * j11;
        }
      }
    }
  }
  if (!out.converged && off_diagonal() <= tol * scale) out.converged = true;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return Eigen::numext::real(a(x, x)) < Eigen::numext::real(a(y, y));
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = Eigen::numext::real(a(src, src));
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

template <class Scalar>
PowerIteration<Scalar> power_iteration(const Mat<Scalar>& t, std::uint64_t seed, double certify_tol, int max_iter) {
  PowerIteration<Scalar> out;
  const Eigen::Index n = t.cols();
  require(n > 0, "power_iteration: empty matrix");
  if (t.norm() == 0.0) {
    out.vector = Vec<Scalar>::Unit(n, 0);
    out.certified = true;
    return out;
  }
  Rng rng(seed);
  Vec<Scalar> x = random_vector<Scalar>(n, rng);
  x.normalize();

  for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
    const Vec<Scalar> y = t * x;
    const Vec<Scalar> z = t.adjoint() * y;
    const double theta = y.squaredNorm();
    out.residual = (z - theta * x).norm();
    if (out.residual <= 1e-14 * theta) break;
    const double nz = z.norm();
    if (nz == 0.0) {
      // Landed in the null space; restart from a fresh direction.
      x = random_vector<Scalar>(n, rng);
      x.normalize();
      continue;
    }
    x = z / nz;
  }
  out.iterations = std::min(out.iterations, max_iter);
  const Vec<Scalar> y = t * x;
  out.sigma = y.norm();
  out.residual = (t.adjoint() * y - y.squaredNorm() * x).norm();
  out.vector = x;
  out.certified = out.residual <= certify_tol * out.sigma * out.sigma;
  return out;
}

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter) {
  const Eigen::Index n = a.cols();
  require(a.rows() == b.size(), "nnls: dimension mismatch");
  NnlsResult out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  // Columns whose entry came back nonpositive right after entering: a
  // rounding artifact of a tiny gradient. Skipped until x moves again.
  std::vector<bool> rejected(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, a.norm() * b.norm());

  auto solve_passive = [&] {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    if (idx.empty()) return s;
    Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd sp = ap.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));
    return s;
  };

  while (out.iterations < max_iter) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && !rejected[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) {
      out.converged = true;
      break;
    }
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd s = solve_passive();
    if (!(s(best) > 0.0)) {
      passive[static_cast<std::size_t>(best)] = false;
      rejected[static_cast<std::size_t>(best)] = true;
      ++out.iterations;
      continue;
    }
    std::fill(rejected.begin(), rejected.end(), false);
    while (out.iterations < max_iter) {
      ++out.iterations;
      double alpha = 1.0;
      bool blocked = false;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          blocked = true;
          const double denom = x(j) - s(j);
          if (denom > 0.0) alpha = std::min(alpha, x(j) / denom);
          else alpha = 0.0;
        }
      }
      if (!blocked) break;
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
      s = solve_passive();
    }
    x = s;
  }
  out.coefficients = x.cwiseMax(0.0);
  return out;
}

LinearProgram simplex_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                               int max_iter) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  require(b.size() == m && c.size() == n, "simplex_maximize: dimension mismatch");
  const Eigen::Index width = n + m;
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m, width + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    tab.row(i).head(n) = sign * a.row(i);
    tab(i, n + i) = 1.0;
    tab(i, width) = sign * b(i);
    basis[static_cast<std::size_t>(i)] = n + i;
  }
  const double eps = 1e-11 * std::max(1.0, a.cwiseAbs().maxCoeff());

  auto pivot = [&](Eigen::Index r, Eigen::Index col) {
    tab.row(r) /= tab(r, col);
    for (Eigen::Index i = 0; i < m; ++i)
      if (i != r && tab(i, col) != 0.0) tab.row(i) -= tab(i, col) * tab.row(r);
    basis[static_cast<std::size_t>(r)] = col;
  };

  int iterations = 0;
  auto run = [&](const Eigen::VectorXd& cost, Eigen::Index allowed) -> LinearProgram::Status {
    while (true) {
      if (++iterations > max_iter) return LinearProgram::Status::IterationLimit;
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < allowed && entering < 0; ++j) {
        if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
        double reduced = cost(j);
        for (Eigen::Index i = 0; i < m; ++i) reduced -= cost(basis[static_cast<std::size_t>(i)]) * tab(i, j);
        if (reduced > eps) entering = j;
      }
      if (entering < 0) return LinearProgram::Status::Optimal;
      Eigen::Index leaving = -1;
      double best_ratio = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (tab(i, entering) <= eps) continue;
        const double ratio = tab(i, width) / tab(i, entering);
        if (leaving < 0 || ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leaving)])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return LinearProgram::Status::Unbounded;
      pivot(leaving, entering);
    }
  };

  LinearProgram out;
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(width);
  phase1.tail(m).setConstant(-1.0);
  out.status = run(phase1, width);
  if (out.status == LinearProgram::Status::IterationLimit) return out;
  double infeasibility = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] >= n) infeasibility += tab(i, width);
  if (infeasibility > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    out.status = LinearProgram::Status::Infeasible;
    return out;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab(i, j)) > eps && std::find(basis.begin(), basis.end(), j) == basis.end()) {
        pivot(i, j);
        break;
      }
    }
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(width);
  phase2.head(n) = c;
  out.status = run(phase2, n);
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = basis[static_cast<std::size_t>(i)];
    if (j < n) out.x(j) = tab(i, width);
  }
  out.value = c.dot(out.x);
  return out;
}

template <class Scalar>
SingularSystem<Scalar> singular_system(const Mat<Scalar>& t) {
  const Eigen::Index n = t.cols();
  const HermitianEigen<Scalar> eig = jacobi_eigen<Scalar>(Mat<Scalar>(t.adjoint() * t));
  SingularSystem<Scalar> out;
  out.values.resize(n);
  out.right.resize(n, n);
  out.left = Mat<Scalar>::Zero(t.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.right.col(k) = eig.vectors.col(src);
    const Vec<Scalar> image = t * eig.vectors.col(src);
    out.values(k) = image.norm();
  }
  const double top = n > 0 ? out.values.maxCoeff() : 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (out.values(k) > 1e-13 * top && out.values(k) > 0.0)
      out.left.col(k) = t * out.right.col(k) / out.values(k);
  }
  return out;
}

template <class Scalar>
double jacobi_spectral_norm(const Mat<Scalar>& t) {
  const SingularSystem<Scalar> s = singular_system<Scalar>(t);
  return s.values.size() > 0 ? s.values.maxCoeff() : 0.0;
}

template HermitianEigen<double> jacobi_eigen<double>(const Mat<double>&, double, int);
template HermitianEigen<Complex> jacobi_eigen<Complex>(const Mat<Complex>&, double, int);
template PowerIteration<double> power_iteration<double>(const Mat<double>&, std::uint64_t, double, int);
template PowerIteration<Complex> power_iteration<Complex>(const Mat<Complex>&, std::uint64_t, double, int);
template SingularSystem<double> singular_system<double>(const Mat<double>&);
template SingularSystem<Complex> singular_system<Complex>(const Mat<Complex>&);
template double jacobi_spectral_norm<double>(const Mat<double>&);
template double jacobi_spectral_norm<Complex>(const Mat<Complex>&);

}  // namespace normkit
