#include "rlap/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace rlap {

namespace {

constexpr double kClosureTol = 1e-9;
// Spline derivatives at the end knots are only accurate to O(h^3).
constexpr double kTabulatedClosureTol = 1e-6;

std::string fmt_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

SphereModel::SphereModel(int n, double k) : n_(n), k_(k) {
  if (n < 2) throw DomainError("SphereModel: n must be >= 2");
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("SphereModel: k must be positive");
}

double SphereModel::volume() const {
  // Vol(S^n(r)) = 2 pi^{(n+1)/2} / Gamma((n+1)/2) r^n
  const double half = 0.5 * (n_ + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half) * std::pow(radius(), n_);
}

bool SphereModel::contains(const Vec& p) const {
  if (p.size() != ambient_dim()) return false;
  return std::abs(p.norm() - radius()) <= 1e-12 * radius();
}

void SphereModel::check_point(const Vec& p) const {
  if (p.size() != ambient_dim()) {
    throw DomainError("point has dimension " + std::to_string(p.size()) + ", expected " +
                      std::to_string(ambient_dim()));
  }
  if (!contains(p)) {
    throw DomainError("point off sphere: |p| = " + fmt_double(p.norm()) +
                      ", radius = " + fmt_double(radius()));
  }
}

bool TangentVector::is_tangent(double tol) const {
  return std::abs(vec.dot(point)) <= tol * vec.norm() * point.norm();
}

Vec tangent_project(const SphereModel& m, const Vec& p, const Vec& w) {
  m.check_point(p);
  if (w.size() != p.size()) throw DomainError("tangent_project: dimension mismatch");
  return w - m.k() * m.k() * w.dot(p) * p;
}

Mat tangent_projector(const SphereModel& m, const Vec& p) {
  m.check_point(p);
  const int dim = m.ambient_dim();
  return Mat::Identity(dim, dim) - m.k() * m.k() * p * p.transpose();
}

Mat orthonormal_frame(const SphereModel& m, const Vec& p) {
  m.check_point(p);
  const int dim = m.ambient_dim();
  const double k2 = m.k() * m.k();
  Mat frame(dim, m.n());
  int found = 0;
  for (int e = 0; e < dim && found < m.n(); ++e) {
    Vec v = -k2 * p(e) * p;
    v(e) += 1.0;
    // Two passes of modified Gram-Schmidt keep the frame orthonormal to
    // roundoff even when the projected basis vector is short.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < found; ++j) v -= frame.col(j).dot(v) * frame.col(j);
      v -= k2 * p.dot(v) * p;
    }
    const double len = v.norm();
    if (len < 1e-6) continue;
    frame.col(found++) = v / len;
  }
  return frame;
}

// ---------------------------------------------------------------------------

NaturalSpline::NaturalSpline(std::vector<double> s, std::vector<double> f)
    : s_(std::move(s)), f_(std::move(f)) {
  const std::size_t n = s_.size();
  if (n < 3 || f_.size() != n) throw DomainError("spline: need >= 3 matching knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(s_[i] > s_[i - 1])) throw DomainError("spline: knots must be strictly increasing");
  }
  // Tridiagonal system for interior second derivatives, natural ends m_0 = m_{n-1} = 0.
  m_.assign(n, 0.0);
  const std::size_t ni = n - 2;
  std::vector<double> diag(ni), upper(ni), rhs(ni);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = s_[i] - s_[i - 1];
    const double h1 = s_[i + 1] - s_[i];
    diag[i - 1] = (h0 + h1) / 3.0;
    upper[i - 1] = h1 / 6.0;
    rhs[i - 1] = (f_[i + 1] - f_[i]) / h1 - (f_[i] - f_[i - 1]) / h0;
  }
  for (std::size_t i = 1; i < ni; ++i) {
    const double w = upper[i - 1] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = ni; i-- > 0;) {
    const double next = (i + 1 < ni) ? m_[i + 2] : 0.0;
    m_[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
  }
}

ProfileJet NaturalSpline::eval(double s) const {
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t i = static_cast<std::size_t>(std::distance(s_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, s_.size() - 1);
  const double h = s_[i] - s_[i - 1];
  const double a = (s_[i] - s) / h;
  const double b = (s - s_[i - 1]) / h;
  const double m0 = m_[i - 1];
  const double m1 = m_[i];
  ProfileJet j{};
  j.f = a * f_[i - 1] + b * f_[i] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
  j.df = (f_[i] - f_[i - 1]) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 +
         (3.0 * b * b - 1.0) * h * m1 / 6.0;
  j.d2f = a * m0 + b * m1;
  return j;
}

// ---------------------------------------------------------------------------

WarpedProfile::WarpedProfile(int n, Variant v, double length)
    : n_(n), variant_(std::move(v)), length_(length) {
  validate();
}

WarpedProfile WarpedProfile::round(int n, double k) {
  if (!(k > 0.0)) throw DomainError("round profile: k must be positive");
  return WarpedProfile(n, RoundProfile{k}, std::numbers::pi / k);
}

WarpedProfile WarpedProfile::perturbed(int n, double k, double eps) {
  if (!(k > 0.0)) throw DomainError("perturbed profile: k must be positive");
  return WarpedProfile(n, PerturbedProfile{k, eps}, std::numbers::pi / k);
}

WarpedProfile WarpedProfile::tabulated(int n, std::vector<double> s, std::vector<double> f) {
  if (s.size() < 64) throw DomainError("tabulated profile: need at least 64 rows");
  if (s.front() != 0.0) throw DomainError("tabulated profile: s must start at 0");
  const double l = s.back();
  return WarpedProfile(n, TabulatedProfile{NaturalSpline(std::move(s), std::move(f))}, l);
}

WarpedProfile WarpedProfile::from_csv(int n, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open profile file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("profile file is empty: " + path);
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "s,f") throw DomainError("profile file must start with header `s,f`");
  std::vector<double> s, f;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream is(line);
    std::string a, b;
    if (!std::getline(is, a, ',') || !std::getline(is, b)) {
      throw DomainError("profile file row " + std::to_string(row) + ": expected `s,f`");
    }
    try {
      s.push_back(std::stod(a));
      f.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw DomainError("profile file row " + std::to_string(row) + ": not a number");
    }
  }
  return tabulated(n, std::move(s), std::move(f));
}

ProfileJet WarpedProfile::jet(double s) const {
  return std::visit(
      [s](const auto& v) -> ProfileJet {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RoundProfile>) {
          const double sn = std::sin(v.k * s);
          const double cs = std::cos(v.k * s);
          return {sn / v.k, cs, -v.k * sn};
        } else if constexpr (std::is_same_v<T, PerturbedProfile>) {
          const double sn = std::sin(v.k * s);
          const double cs = std::cos(v.k * s);
          return {sn / v.k + v.eps * sn * sn * sn, cs + 3.0 * v.eps * v.k * sn * sn * cs,
                  -v.k * sn + v.eps * v.k * v.k * (6.0 * sn * cs * cs - 3.0 * sn * sn * sn)};
        } else {
          return v.spline.eval(s);
        }
      },
      variant_);
}

void WarpedProfile::validate() const {
  if (n_ < 2) throw DomainError("warped profile: n must be >= 2");
  if (!(length_ > 0.0)) throw DomainError("warped profile: diameter must be positive");
  const double closure_tol =
      std::holds_alternative<TabulatedProfile>(variant_) ? kTabulatedClosureTol : kClosureTol;
  const ProfileJet start = jet(0.0);
  const ProfileJet end = jet(length_);
  if (std::abs(start.f) > closure_tol || std::abs(end.f) > closure_tol) {
    throw DomainError("warped profile: f must vanish at both ends");
  }
  if (std::abs(start.df - 1.0) > closure_tol || std::abs(end.df + 1.0) > closure_tol) {
    throw DomainError("warped profile: smooth closure requires f'(0) = 1 and f'(l) = -1");
  }
  constexpr int kProbe = 256;
  for (int j = 1; j <= kProbe; ++j) {
    const double s = length_ * j / (kProbe + 1);
    if (!(f(s) > 0.0)) throw DomainError("warped profile: f must be positive on (0, l)");
  }
}

bool WarpedProfile::is_round(double k, double tol) const {
  if (std::abs(length_ - std::numbers::pi / k) > tol) return false;
  constexpr int kProbe = 512;
  for (int j = 1; j <= kProbe; ++j) {
    const double s = length_ * j / (kProbe + 1);
    if (std::abs(f(s) - std::sin(k * s) / k) > tol) return false;
  }
  return true;
}

std::string WarpedProfile::describe() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RoundProfile>) {
          return "round:k=" + fmt_double(v.k);
        } else if constexpr (std::is_same_v<T, PerturbedProfile>) {
          return "perturbed:k=" + fmt_double(v.k) + ",eps=" + fmt_double(v.eps);
        } else {
          return "tabulated";
        }
      },
      variant_);
}

// ---------------------------------------------------------------------------

namespace {

ProfileJet interior_jet(const WarpedProfile& w, double s) {
  if (!(s > 0.0 && s < w.length())) {
    throw DomainError("curvature is defined on the open interval (0, l); got s = " + fmt_double(s));
  }
  return w.jet(s);
}

}  // namespace

double mean_curvature(const WarpedProfile& w, double s) {
  const ProfileJet j = interior_jet(w, s);
  return -j.df / j.f;
}

double second_fundamental_norm_sq(const WarpedProfile& w, double s) {
  const ProfileJet j = interior_jet(w, s);
  const double r = j.df / j.f;
  return (w.n() - 1) * r * r;
}

std::vector<double> principal_curvatures(const WarpedProfile& w, double s) {
  const ProfileJet j = interior_jet(w, s);
  return std::vector<double>(static_cast<std::size_t>(w.n() - 1), -j.df / j.f);
}

double umbilic_discriminant(const std::vector<double>& principal) {
  const double m = static_cast<double>(principal.size());
  if (m < 1) return 0.0;
  // -(sum l_i^2)/m + (sum l_i / m)^2 = -(1/m^2) sum_{i<j} (l_i - l_j)^2
  double pairs = 0.0;
  for (std::size_t i = 0; i < principal.size(); ++i) {
    for (std::size_t j = i + 1; j < principal.size(); ++j) {
      const double d = principal[i] - principal[j];
      pairs += d * d;
    }
  }
  return -pairs / (m * m);
}

RicciComponents ricci(const WarpedProfile& w, double s) {
  const ProfileJet j = interior_jet(w, s);
  const int n = w.n();
  return {-(n - 1) * j.d2f / j.f,
          -j.d2f / j.f + (n - 2) * (1.0 - j.df * j.df) / (j.f * j.f)};
}

RicciCheck ricci_lower_bound_check(const WarpedProfile& w, double k, int grid) {
  if (grid < 16) throw DomainError("ricci_lower_bound_check: grid must be >= 16");
  double lowest = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= grid; ++j) {
    const RicciComponents r = ricci(w, w.length() * j / (grid + 1));
    lowest = std::min({lowest, r.radial, r.tangential});
  }
  const double margin = lowest - (w.n() - 1) * k * k;
  return {margin >= -1e-9, margin, lowest};
}

double largest_admissible_k(const WarpedProfile& w, int grid) {
  const RicciCheck c = ricci_lower_bound_check(w, 0.0, grid);
  if (c.min_ricci <= 0.0) return 0.0;
  return std::sqrt(c.min_ricci / (w.n() - 1));
}

}  // namespace rlap
