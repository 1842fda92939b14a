#pragma once

#include "rlap/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace rlap {

/// Round sphere S^n(1/k) embedded in R^{n+1}, centered at the origin.
class SphereModel {
 public:
  SphereModel(int n, double k);

  int n() const { return n_; }
  int ambient_dim() const { return n_ + 1; }
  double k() const { return k_; }
  double radius() const { return 1.0 / k_; }
  double volume() const;

  bool contains(const Vec& p) const;
  /// Throws DomainError unless | |p| - 1/k | <= 1e-12 / k.
  void check_point(const Vec& p) const;

  bool operator==(const SphereModel&) const = default;

 private:
  int n_;
  double k_;
};

/// A point on the sphere together with an ambient vector tangent there.
struct TangentVector {
  Vec point;
  Vec vec;

  bool is_tangent(double tol = 1e-10) const;
};

/// w - k^2 <w,p> p, the orthogonal projection onto T_p S^n(1/k).
Vec tangent_project(const SphereModel& m, const Vec& p, const Vec& w);

/// Matrix of tangent_project at p: I - k^2 p p^T.
Mat tangent_projector(const SphereModel& m, const Vec& p);

/// n orthonormal tangent vectors at p as columns, from Gram-Schmidt on the
/// projected standard basis in coordinate order.
Mat orthonormal_frame(const SphereModel& m, const Vec& p);

// ---------------------------------------------------------------------------
// Warped products ds^2 + f(s)^2 g_{S^{n-1}}, s in [0, l].

struct ProfileJet {
  double f;
  double df;
  double d2f;
};

/// Natural cubic spline through (s_i, f_i).
class NaturalSpline {
 public:
  NaturalSpline(std::vector<double> s, std::vector<double> f);

  ProfileJet eval(double s) const;
  double front() const { return s_.front(); }
  double back() const { return s_.back(); }
  std::size_t size() const { return s_.size(); }

 private:
  std::vector<double> s_;
  std::vector<double> f_;
  std::vector<double> m_;  // second derivatives at the knots
};

struct RoundProfile {
  double k;
};

/// f(s) = sin(ks)/k + eps sin^3(ks) on [0, pi/k].
struct PerturbedProfile {
  double k;
  double eps;
};

struct TabulatedProfile {
  NaturalSpline spline;
};

class WarpedProfile {
 public:
  using Variant = std::variant<RoundProfile, PerturbedProfile, TabulatedProfile>;

  static WarpedProfile round(int n, double k);
  static WarpedProfile perturbed(int n, double k, double eps);
  static WarpedProfile tabulated(int n, std::vector<double> s, std::vector<double> f);
  /// CSV with header `s,f`, at least 64 rows, s strictly increasing from 0.
  static WarpedProfile from_csv(int n, const std::string& path);

  int n() const { return n_; }
  double length() const { return length_; }
  const Variant& variant() const { return variant_; }

  ProfileJet jet(double s) const;
  double f(double s) const { return jet(s).f; }

  /// True when f agrees with sin(ks)/k to `tol` on a uniform interior grid
  /// and the diameters agree.
  bool is_round(double k, double tol = 1e-9) const;

  /// Short text form: `round:k=1`, `perturbed:k=1,eps=0.05`, `tabulated`.
  std::string describe() const;

 private:
  WarpedProfile(int n, Variant v, double length);
  void validate() const;

  int n_;
  Variant variant_;
  double length_;
};

/// Mean curvature of the geodesic sphere at distance s, normalized as the
/// average principal curvature, with respect to the normal pointing to the
/// center: H = -f'/f.
double mean_curvature(const WarpedProfile& w, double s);

/// |B|^2 = (n-1) (f'/f)^2.
double second_fundamental_norm_sq(const WarpedProfile& w, double s);

/// All n-1 principal curvatures of the geodesic sphere (umbilic: all equal).
std::vector<double> principal_curvatures(const WarpedProfile& w, double s);

/// -|B|^2/(n-1) + H^2 evaluated from the principal curvatures. Never
/// positive; zero exactly when the sphere is umbilic.
double umbilic_discriminant(const std::vector<double>& principal);

struct RicciComponents {
  double radial;
  double tangential;
};

RicciComponents ricci(const WarpedProfile& w, double s);

struct RicciCheck {
  bool passed;
  double margin;      // min Ric - (n-1)k^2 over the grid
  double min_ricci;
};

/// Samples Ric on s_j = j l/(grid+1), j = 1..grid.
RicciCheck ricci_lower_bound_check(const WarpedProfile& w, double k, int grid);

/// sqrt(min Ric / (n-1)) over the same grid: the largest k the check admits.
double largest_admissible_k(const WarpedProfile& w, int grid);

}  // namespace rlap
