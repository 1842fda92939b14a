#include "rlap/eigen_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlap {

Mat cholesky_lower(const Mat& b) {
  const int n = static_cast<int>(b.rows());
  if (b.cols() != n) throw DomainError("cholesky: matrix must be square");
  Mat l = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = b(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NumericalError("mass matrix not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = b(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

JacobiResult jacobi_eigen(const Mat& input, double tol, int max_sweeps) {
  const int n = static_cast<int>(input.rows());
  if (input.cols() != n) throw DomainError("jacobi: matrix must be square");
  Mat a = 0.5 * (input + input.transpose());
  Mat v = Mat::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);

  auto off_norm = [&] {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > tol * scale; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // rotation annihilating a(p,q): t = tan(theta), smaller root
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_norm() > tol * scale) {
    throw NumericalError("jacobi: no convergence after " + std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  JacobiResult out{Vec(n), Mat(n, n), sweep};
  for (int i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

SpectralResult solve_generalized(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DomainError("solve_generalized: A and B must be square and of equal size");
  }
  const Mat l = cholesky_lower(0.5 * (b + b.transpose()));
  const auto tri = l.triangularView<Eigen::Lower>();
  // C = L^{-1} A L^{-T}
  Mat y = tri.solve(a);
  Mat c = tri.solve(y.transpose()).transpose();
  const JacobiResult j = jacobi_eigen(c);
  SpectralResult out;
  out.eigenvalues = j.values;
  out.vectors = l.transpose().triangularView<Eigen::Upper>().solve(j.vectors);
  return out;
}

// ---------------------------------------------------------------------------

int sturm_count(const Tridiagonal& t, double x) {
  const int n = t.size();
  int count = 0;
  double d = 1.0;
  for (int i = 0; i < n; ++i) {
    const double e2 = i > 0 ? t.off(i - 1) * t.off(i - 1) : 0.0;
    d = (t.diag(i) - x) - (i > 0 ? e2 / d : 0.0);
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

double tridiagonal_eigenvalue(const Tridiagonal& t, int index, double rel_tol) {
  const int n = t.size();
  if (index < 0 || index >= n) throw DomainError("tridiagonal_eigenvalue: index out of range");
  // Gershgorin interval
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off(i - 1));
    if (i + 1 < n) r += std::abs(t.off(i));
    lo = std::min(lo, t.diag(i) - r);
    hi = std::max(hi, t.diag(i) + r);
  }
  const double span = std::max(std::abs(lo), std::abs(hi));
  for (int iter = 0; iter < 200 && hi - lo > rel_tol * span; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(t, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

Vec tridiagonal_apply(const Tridiagonal& t, const Vec& x) {
  const int n = t.size();
  Vec y = t.diag.cwiseProduct(x);
  for (int i = 0; i + 1 < n; ++i) {
    y(i) += t.off(i) * x(i + 1);
    y(i + 1) += t.off(i) * x(i);
  }
  return y;
}

// Solves (T - shift) y = b by LU with partial pivoting (fill-in of one extra
// superdiagonal).
Vec shifted_solve(const Tridiagonal& t, double shift, const Vec& b) {
  const int n = t.size();
  std::vector<double> dl(n, 0.0), d(n), du(n, 0.0), du2(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = t.diag(i) - shift;
  for (int i = 0; i + 1 < n; ++i) {
    dl[i] = t.off(i);
    du[i] = t.off(i);
  }
  Vec x = b;
  const double tiny = 1e-300;
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
      x(i + 1) -= f * x(i);
    } else {
      // swap rows i and i+1
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      std::swap(x(i), x(i + 1));
      x(i + 1) -= f * x(i);
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  for (int i = n - 1; i >= 0; --i) {
    double s = x(i);
    if (i + 1 < n) s -= du[i] * x(i + 1);
    if (i + 2 < n) s -= du2[i] * x(i + 2);
    x(i) = s / d[i];
  }
  return x;
}

}  // namespace

InverseIterationResult inverse_iteration(const Tridiagonal& t, double lambda,
                                         const std::vector<Vec>& deflate, double tol,
                                         int max_iter) {
  const int n = t.size();
  double tnorm = 0.0;
  for (int i = 0; i < n; ++i) tnorm = std::max(tnorm, std::abs(t.diag(i)));
  for (int i = 0; i + 1 < n; ++i) tnorm = std::max(tnorm, std::abs(t.off(i)));
  tnorm = std::max(tnorm, 1e-300);

  // deterministic, generic start vector
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::sin(1.7 * i + 0.3);
  v.normalize();
  // a tiny shift keeps the factorization nonsingular when lambda is exact
  const double shift = lambda + 4.0 * std::numeric_limits<double>::epsilon() * tnorm;

  double residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    for (const Vec& u : deflate) v -= u.dot(v) * u;
    Vec y = shifted_solve(t, shift, v);
    for (const Vec& u : deflate) y -= u.dot(y) * u;
    const double ny = y.norm();
    if (!std::isfinite(ny) || ny == 0.0) throw NumericalError("inverse iteration broke down");
    v = y / ny;
    residual = (tridiagonal_apply(t, v) - lambda * v).norm();
    if (residual <= tol * tnorm && iter >= 1) break;
  }
  if (residual > tol * tnorm) {
    throw NumericalError("inverse iteration did not converge: residual " +
                         std::to_string(residual));
  }
  return {v, residual, iter + 1};
}

}  // namespace rlap
