#pragma once

#include "rlap/geometry.hpp"
#include "rlap/polynomial.hpp"
#include "rlap/quadrature.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rlap {

inline constexpr int kMaxFieldDegree = 6;

/// Tangent vector field on S^n(1/k) given as the tangential part of a
/// polynomial map P : R^{n+1} -> R^{n+1},
///
///   X(p) = P(p) - k^2 <P(p), p> p.
///
/// All derivatives are taken exactly on the monomial coefficients.
class AmbientPolyField {
 public:
  /// `coeffs` is M x (n+1): column l holds the coefficients of P_l over the
  /// monomial basis of the given degree.
  AmbientPolyField(const SphereModel& sphere, int degree, Mat coeffs);

  static AmbientPolyField zero(const SphereModel& sphere, int degree = 0);
  /// V_w(p) = w - k^2 <w,p> p.
  static AmbientPolyField projection(const SphereModel& sphere, const Vec& w);
  /// X(p) = A p, A skew-symmetric.
  static AmbientPolyField killing(const SphereModel& sphere, const Mat& a);
  /// Rotation generator of the (i, j) coordinate plane (0-based), e_i -> e_j.
  static AmbientPolyField killing_plane(const SphereModel& sphere, int i, int j);
  /// X(p) = e p under quaternion multiplication, p = a + b i + c j + d k;
  /// axis one of 'i', 'j', 'k'. Requires n = 3.
  static AmbientPolyField hopf(const SphereModel& sphere, char axis);
  /// Projection of e_out x^a.
  static AmbientPolyField monomial(const SphereModel& sphere, int out, const Exponent& a);
  /// CSV rows `out_coord, a_1, ..., a_{n+1}, coefficient`; out_coord is
  /// 1-based. A leading non-numeric header line is skipped.
  static AmbientPolyField from_csv(const SphereModel& sphere, const std::string& path);

  const SphereModel& sphere() const { return sphere_; }
  int degree() const { return basis_->degree(); }
  const MonomialBasis& basis() const { return *basis_; }
  const Mat& coeffs() const { return coeffs_; }

  /// P(x) for any ambient x.
  Vec ambient(const Vec& x) const;

  Vec eval(const Vec& p) const;
  Vec operator()(const Vec& p) const { return eval(p); }
  TangentVector eval_tangent(const Vec& p) const { return {p, eval(p)}; }

  /// nabla_u X = D_u X + k^2 <X, u> p for u tangent at p.
  Vec covariant_derivative(const Vec& p, const Vec& u) const;

  /// Columns nabla_{E_i} X for the given frame (n columns).
  Mat covariant_derivatives(const Vec& p, const Mat& frame) const;

  /// div nabla X = sum_i (nabla_{E_i} nabla_{E_i} X - nabla_{nabla_{E_i} E_i} X).
  Vec rough_laplacian(const Vec& p) const;
  Vec rough_laplacian(const Vec& p, const Mat& frame) const;

  double divergence(const Vec& p) const;
  double divergence(const Vec& p, const Mat& frame) const;

  /// |Kill(X)|^2 = sum_{ij} Kill(E_i, E_j)^2, Kill(U,V) = (<nabla_U X,V> + <nabla_V X,U>)/2.
  double kill_tensor_norm_sq(const Vec& p) const;
  double kill_tensor_norm_sq(const Vec& p, const Mat& frame) const;

  /// |nabla X|^2 at p.
  double gradient_norm_sq(const Vec& p) const;

  /// The field x -> g^T P(g x), i.e. p -> g^{-1} X(g p) for orthogonal g.
  AmbientPolyField pullback(const Mat& g) const;

  AmbientPolyField& operator+=(const AmbientPolyField& other);
  AmbientPolyField& operator*=(double s);
  friend AmbientPolyField operator+(AmbientPolyField a, const AmbientPolyField& b) {
    return a += b;
  }
  friend AmbientPolyField operator-(AmbientPolyField a, const AmbientPolyField& b) {
    AmbientPolyField nb = b;
    nb *= -1.0;
    return a += nb;
  }
  friend AmbientPolyField operator*(double s, AmbientPolyField a) { return a *= s; }

  AmbientPolyField with_degree(int degree) const;

 private:
  struct PointData;
  PointData point_data(const Vec& p, bool with_hessian) const;

  SphereModel sphere_;
  std::shared_ptr<const MonomialBasis> basis_;
  Mat coeffs_;
};

/// sum_i c_i X_i; all fields on the same sphere.
AmbientPolyField linear_combination(const std::vector<AmbientPolyField>& fields, const Vec& c);

/// Uniformly distributed sphere point from a generator-independent recipe
/// (normalized Gaussian).
template <class Rng>
Vec random_sphere_point(const SphereModel& m, Rng& rng);

/// Energy F(X) = int |nabla X|^2 / int |X|^2.
double energy(const AmbientPolyField& x, const QuadratureRule& rule);

/// int |nabla X|^2 - int (Ric(X,X) + 2 |Kill X|^2 - (div X)^2) with
/// Ric(X,X) = (n-1) k^2 |X|^2.
double bochner_yano_residual(const AmbientPolyField& x, const QuadratureRule& rule);

}  // namespace rlap

#include <random>

namespace rlap {

template <class Rng>
Vec random_sphere_point(const SphereModel& m, Rng& rng) {
  std::normal_distribution<double> normal;
  Vec v(m.ambient_dim());
  do {
    for (int i = 0; i < v.size(); ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-12);
  return v * (m.radius() / v.norm());
}

}  // namespace rlap
