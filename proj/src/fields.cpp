#include "rlap/fields.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rlap {

namespace {

void require_tangent(const Vec& p, const Vec& u) {
  if (u.size() != p.size()) throw DomainError("tangent vector has wrong dimension");
  if (!TangentVector{p, u}.is_tangent()) {
    throw DomainError("vector is not tangent to the sphere at p");
  }
}

}  // namespace

// Ambient quantities of the extension X~(x) = P(x) - k^2 <P(x), x> x at p.
struct AmbientPolyField::PointData {
  Vec value;     // X(p), tangent
  Mat jacobian;  // D X~(p)
  Vec grad_g;    // gradient of g(x) = <P(x), x>
  Mat hess_p;    // (n+1) x (n+1)^2: row l is the flattened Hessian of P_l
};

AmbientPolyField::AmbientPolyField(const SphereModel& sphere, int degree, Mat coeffs)
    : sphere_(sphere), coeffs_(std::move(coeffs)) {
  if (degree < 0 || degree > kMaxFieldDegree) {
    throw DomainError("field degree must be in [0, " + std::to_string(kMaxFieldDegree) + "]");
  }
  basis_ = MonomialBasis::get(sphere.ambient_dim(), degree);
  if (coeffs_.rows() != basis_->size() || coeffs_.cols() != sphere.ambient_dim()) {
    throw DomainError("field coefficient table has wrong shape");
  }
}

AmbientPolyField AmbientPolyField::zero(const SphereModel& sphere, int degree) {
  const int m = MonomialBasis::get(sphere.ambient_dim(), degree)->size();
  return {sphere, degree, Mat::Zero(m, sphere.ambient_dim())};
}

AmbientPolyField AmbientPolyField::projection(const SphereModel& sphere, const Vec& w) {
  if (w.size() != sphere.ambient_dim()) throw DomainError("projection: vector dimension mismatch");
  Mat c = w.transpose();
  return {sphere, 0, c};
}

AmbientPolyField AmbientPolyField::killing(const SphereModel& sphere, const Mat& a) {
  const int dim = sphere.ambient_dim();
  if (a.rows() != dim || a.cols() != dim) throw DomainError("killing: matrix dimension mismatch");
  const double asym = (a + a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw DomainError("killing: generator must be skew-symmetric");
  }
  const auto basis = MonomialBasis::get(dim, 1);
  Mat c = Mat::Zero(basis->size(), dim);
  for (int j = 0; j < dim; ++j) {
    Exponent e(dim, 0);
    e[j] = 1;
    c.row(basis->index(e)) = a.col(j).transpose();
  }
  return {sphere, 1, c};
}

AmbientPolyField AmbientPolyField::killing_plane(const SphereModel& sphere, int i, int j) {
  const int dim = sphere.ambient_dim();
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) {
    throw DomainError("killing_plane: invalid coordinate plane");
  }
  Mat a = Mat::Zero(dim, dim);
  a(j, i) = 1.0;
  a(i, j) = -1.0;
  return killing(sphere, a);
}

AmbientPolyField AmbientPolyField::hopf(const SphereModel& sphere, char axis) {
  if (sphere.n() != 3) throw DomainError("hopf fields require n = 3");
  // left multiplication by a unit imaginary quaternion, coordinates (a, b, c, d)
  Mat l(4, 4);
  switch (axis) {
    case 'i':
      l << 0, -1, 0, 0,  //
          1, 0, 0, 0,    //
          0, 0, 0, -1,   //
          0, 0, 1, 0;
      break;
    case 'j':
      l << 0, 0, -1, 0,  //
          0, 0, 0, 1,    //
          1, 0, 0, 0,    //
          0, -1, 0, 0;
      break;
    case 'k':
      l << 0, 0, 0, -1,  //
          0, 0, -1, 0,   //
          0, 1, 0, 0,    //
          1, 0, 0, 0;
      break;
    default:
      throw DomainError(std::string("hopf axis must be i, j or k; got ") + axis);
  }
  return killing(sphere, l);
}

AmbientPolyField AmbientPolyField::monomial(const SphereModel& sphere, int out, const Exponent& a) {
  const int dim = sphere.ambient_dim();
  if (out < 0 || out >= dim) throw DomainError("monomial: output coordinate out of range");
  int deg = 0;
  for (int x : a) deg += x;
  const auto basis = MonomialBasis::get(dim, deg);
  const int idx = basis->index(a);
  if (idx < 0) throw DomainError("monomial: invalid exponent");
  Mat c = Mat::Zero(basis->size(), dim);
  c(idx, out) = 1.0;
  return {sphere, deg, c};
}

AmbientPolyField AmbientPolyField::from_csv(const SphereModel& sphere, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open field file: " + path);
  const int dim = sphere.ambient_dim();
  struct Term {
    int out;
    Exponent a;
    double c;
  };
  std::vector<Term> terms;
  int degree = 0;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::istringstream is(line);
    for (std::string cell; std::getline(is, cell, ',');) cells.push_back(cell);
    std::vector<double> vals;
    try {
      for (const auto& c : cells) vals.push_back(std::stod(c));
    } catch (const std::exception&) {
      if (row == 1 && terms.empty()) continue;  // header
      throw DomainError("field file row " + std::to_string(row) + ": not a number");
    }
    if (static_cast<int>(vals.size()) != dim + 2) {
      throw DomainError("field file row " + std::to_string(row) + ": expected " +
                        std::to_string(dim + 2) + " columns");
    }
    Term t{static_cast<int>(vals[0]) - 1, Exponent(dim), vals.back()};
    if (t.out < 0 || t.out >= dim) {
      throw DomainError("field file row " + std::to_string(row) + ": out_coord out of range");
    }
    int deg = 0;
    for (int i = 0; i < dim; ++i) {
      t.a[i] = static_cast<int>(vals[i + 1]);
      if (t.a[i] < 0) throw DomainError("field file: negative exponent");
      deg += t.a[i];
    }
    degree = std::max(degree, deg);
    terms.push_back(std::move(t));
  }
  if (degree > kMaxFieldDegree) throw DomainError("field file: degree exceeds 6");
  const auto basis = MonomialBasis::get(dim, degree);
  Mat c = Mat::Zero(basis->size(), dim);
  for (const auto& t : terms) c(basis->index(t.a), t.out) += t.c;
  return {sphere, degree, c};
}

Vec AmbientPolyField::ambient(const Vec& x) const {
  return coeffs_.transpose() * basis_->values(x);
}

AmbientPolyField::PointData AmbientPolyField::point_data(const Vec& p, bool with_hessian) const {
  sphere_.check_point(p);
  const int dim = sphere_.ambient_dim();
  const double k2 = sphere_.k() * sphere_.k();
  const auto jet = basis_->jet(p, with_hessian);
  const Vec pv = coeffs_.transpose() * jet.value;
  const Mat dp = coeffs_.transpose() * jet.grad;  // dp(l, j) = dP_l / dx_j
  const double g = pv.dot(p);
  PointData d;
  d.grad_g = dp.transpose() * p + pv;
  d.value = pv - k2 * g * p;
  d.jacobian = dp - k2 * p * d.grad_g.transpose() - k2 * g * Mat::Identity(dim, dim);
  if (with_hessian) d.hess_p = coeffs_.transpose() * jet.hess;
  return d;
}

Vec AmbientPolyField::eval(const Vec& p) const {
  sphere_.check_point(p);
  const Vec pv = ambient(p);
  return pv - sphere_.k() * sphere_.k() * pv.dot(p) * p;
}

Vec AmbientPolyField::covariant_derivative(const Vec& p, const Vec& u) const {
  sphere_.check_point(p);
  require_tangent(p, u);
  const PointData d = point_data(p, false);
  return d.jacobian * u + sphere_.k() * sphere_.k() * d.value.dot(u) * p;
}

Mat AmbientPolyField::covariant_derivatives(const Vec& p, const Mat& frame) const {
  const PointData d = point_data(p, false);
  const double k2 = sphere_.k() * sphere_.k();
  Mat out = d.jacobian * frame;
  for (int i = 0; i < frame.cols(); ++i) out.col(i) += k2 * d.value.dot(frame.col(i)) * p;
  return out;
}

Vec AmbientPolyField::rough_laplacian(const Vec& p) const {
  return rough_laplacian(p, orthonormal_frame(sphere_, p));
}

// With T(x) = Pi(x) J(x) Pi(x) (Pi the tangential projector, J = D X~),
// (nabla_u nabla X)(u) = Pi (D_u T) u for tangent u. Expanding D_u Pi gives
//
//   div nabla X = sum_i [ Pi D^2 X~(E_i, E_i) - k^2 <p, J E_i> E_i ] - n k^2 Pi J p.
Vec AmbientPolyField::rough_laplacian(const Vec& p, const Mat& frame) const {
  const PointData d = point_data(p, true);
  const int dim = sphere_.ambient_dim();
  const double k2 = sphere_.k() * sphere_.k();
  Vec acc = Vec::Zero(dim);
  for (int i = 0; i < frame.cols(); ++i) {
    const Vec e = frame.col(i);
    Vec d2p(dim);
    for (int l = 0; l < dim; ++l) {
      double s = 0.0;
      for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) s += d.hess_p(l, a * dim + b) * e(a) * e(b);
      }
      d2p(l) = s;
    }
    // Pi D^2 X~(e, e) = Pi D^2 P(e, e) - 2 k^2 <grad g, e> e
    acc += d2p - 2.0 * k2 * d.grad_g.dot(e) * e;
    acc -= k2 * p.dot(d.jacobian * e) * e;
  }
  acc -= frame.cols() * k2 * (d.jacobian * p);
  return acc - k2 * acc.dot(p) * p;
}

double AmbientPolyField::divergence(const Vec& p) const {
  return divergence(p, orthonormal_frame(sphere_, p));
}

double AmbientPolyField::divergence(const Vec& p, const Mat& frame) const {
  const Mat cov = covariant_derivatives(p, frame);
  double s = 0.0;
  for (int i = 0; i < frame.cols(); ++i) s += cov.col(i).dot(frame.col(i));
  return s;
}

double AmbientPolyField::kill_tensor_norm_sq(const Vec& p) const {
  return kill_tensor_norm_sq(p, orthonormal_frame(sphere_, p));
}

double AmbientPolyField::kill_tensor_norm_sq(const Vec& p, const Mat& frame) const {
  const Mat cov = covariant_derivatives(p, frame);
  const Mat m = frame.transpose() * cov;  // m(j, i) = <nabla_{E_i} X, E_j>
  const Mat sym = 0.5 * (m + m.transpose());
  return sym.squaredNorm();
}

double AmbientPolyField::gradient_norm_sq(const Vec& p) const {
  return covariant_derivatives(p, orthonormal_frame(sphere_, p)).squaredNorm();
}

AmbientPolyField AmbientPolyField::pullback(const Mat& g) const {
  const int dim = sphere_.ambient_dim();
  if (g.rows() != dim || g.cols() != dim) throw DomainError("pullback: dimension mismatch");
  const Mat sub = substitute_linear(*basis_, coeffs_, g);  // P(g x)
  return {sphere_, degree(), sub * g};  // column l: sum_m g_{ml} P_m(g x)
}

AmbientPolyField& AmbientPolyField::operator+=(const AmbientPolyField& other) {
  if (!(other.sphere_ == sphere_)) throw DomainError("adding fields on different spheres");
  if (other.degree() > degree()) {
    *this = with_degree(other.degree());
  }
  coeffs_.topRows(other.coeffs_.rows()) += other.coeffs_;
  return *this;
}

AmbientPolyField& AmbientPolyField::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

AmbientPolyField AmbientPolyField::with_degree(int degree) const {
  if (degree <= this->degree()) return *this;
  const auto to = MonomialBasis::get(sphere_.ambient_dim(), degree);
  return {sphere_, degree, promote(*basis_, *to, coeffs_)};
}

AmbientPolyField linear_combination(const std::vector<AmbientPolyField>& fields, const Vec& c) {
  if (fields.empty()) throw DomainError("linear_combination: no fields");
  if (static_cast<int>(fields.size()) != c.size()) {
    throw DomainError("linear_combination: coefficient count mismatch");
  }
  int degree = 0;
  for (const auto& f : fields) degree = std::max(degree, f.degree());
  AmbientPolyField out = AmbientPolyField::zero(fields.front().sphere(), degree);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (c(static_cast<int>(i)) == 0.0) continue;
    out += c(static_cast<int>(i)) * fields[i];
  }
  return out;
}

double energy(const AmbientPolyField& x, const QuadratureRule& rule) {
  if (!(rule.sphere == x.sphere())) throw DomainError("energy: rule and field on different spheres");
  const double mass = integrate_scalar([&](const Vec& p) { return x.eval(p).squaredNorm(); }, rule);
  if (!(mass > 1e-14)) throw NumericalError("zero-norm field: energy quotient undefined");
  const double stiff = integrate_scalar([&](const Vec& p) { return x.gradient_norm_sq(p); }, rule);
  return stiff / mass;
}

double bochner_yano_residual(const AmbientPolyField& x, const QuadratureRule& rule) {
  const SphereModel& m = x.sphere();
  const double ric = (m.n() - 1) * m.k() * m.k();
  return integrate_scalar(
      [&](const Vec& p) {
        const Mat frame = orthonormal_frame(m, p);
        const Mat cov = x.covariant_derivatives(p, frame);
        const Mat t = frame.transpose() * cov;
        const Mat sym = 0.5 * (t + t.transpose());
        const double div = t.trace();
        const double xx = x.eval(p).squaredNorm();
        return cov.squaredNorm() - (ric * xx + 2.0 * sym.squaredNorm() - div * div);
      },
      rule);
}

}  // namespace rlap
