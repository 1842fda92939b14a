#include "rlap/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rlap {

namespace {

constexpr double kOrthoTol = 1e-10;

void require_orthogonal(const Mat& g, int dim) {
  if (g.rows() != dim || g.cols() != dim) throw DomainError("group element has wrong dimension");
  const double err = (g.transpose() * g - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (err > kOrthoTol) throw DomainError("group element is not orthogonal");
}

std::string join_coords(const Vec& v) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  return os.str();
}

// Orthonormal basis of v-perp as columns (dim x dim-1).
Mat complement_basis(const Vec& v) {
  const int dim = static_cast<int>(v.size());
  Eigen::HouseholderQR<Mat> qr(v.normalized());
  Mat q = qr.householderQ();
  return q.rightCols(dim - 1);
}

Mat closure(const std::vector<Mat>& generators, int dim, std::size_t limit) {
  std::vector<Mat> elems{Mat::Identity(dim, dim)};
  auto known = [&](const Mat& g) {
    return std::any_of(elems.begin(), elems.end(),
                       [&](const Mat& h) { return (h - g).cwiseAbs().maxCoeff() < 1e-9; });
  };
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const Mat& s : generators) {
      Mat g = s * elems[i];
      if (!known(g)) {
        elems.push_back(std::move(g));
        if (elems.size() > limit) throw NumericalError("group closure exceeded expected order");
      }
    }
  }
  Mat packed(dim, dim * static_cast<int>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i) packed.middleCols(dim * i, dim) = elems[i];
  return packed;
}

std::vector<Mat> unpack(const Mat& packed, int dim) {
  std::vector<Mat> out;
  for (int c = 0; c < packed.cols(); c += dim) out.push_back(packed.middleCols(c, dim));
  return out;
}

Mat axis_rotation(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

// Full icosahedral group I_h (order 120) in standard orientation.
std::vector<Mat> icosahedral_group() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  Mat cyc = Mat::Zero(3, 3);
  cyc(0, 2) = cyc(1, 0) = cyc(2, 1) = 1.0;
  const Mat flip = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  const Mat five = axis_rotation({0.0, 1.0, phi}, 2.0 * std::numbers::pi / 5.0);
  std::vector<Mat> rot = unpack(closure({cyc, flip, five}, 3, 60), 3);
  if (rot.size() != 60) throw NumericalError("icosahedral rotation group has wrong order");
  std::vector<Mat> full = rot;
  for (const Mat& g : rot) full.push_back(-g);
  return full;
}

std::vector<Mat> dihedral_group(int m) {
  std::vector<Mat> out;
  for (int t = 0; t < m; ++t) {
    const double a = 2.0 * std::numbers::pi * t / m;
    Mat r(2, 2);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    out.push_back(r);
    Mat s(2, 2);
    s << std::cos(a), std::sin(a), std::sin(a), -std::cos(a);
    out.push_back(s);
  }
  return out;
}

// Signed permutation matrices of size d.
std::vector<Mat> hyperoctahedral_group(int d) {
  std::vector<int> perm(d);
  for (int i = 0; i < d; ++i) perm[i] = i;
  std::vector<Mat> out;
  do {
    for (int signs = 0; signs < (1 << d); ++signs) {
      Mat g = Mat::Zero(d, d);
      for (int i = 0; i < d; ++i) g(perm[i], i) = (signs >> i) & 1 ? -1.0 : 1.0;
      out.push_back(std::move(g));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Mat planar_rotation(int dim, int i, int j, double angle) {
  Mat g = Mat::Identity(dim, dim);
  g(i, i) = std::cos(angle);
  g(j, j) = std::cos(angle);
  g(j, i) = std::sin(angle);
  g(i, j) = -std::sin(angle);
  return g;
}

// Fixed-order pairwise sum of pullback coefficients over elements [lo, hi).
Mat pullback_sum(const AmbientPolyField& x, const std::vector<Mat>& elems, std::size_t lo,
                 std::size_t hi) {
  if (hi - lo == 1) return x.pullback(elems[lo]).coeffs();
  const std::size_t mid = lo + (hi - lo) / 2;
  return pullback_sum(x, elems, lo, mid) + pullback_sum(x, elems, mid, hi);
}

double sup_norm(const FieldFn& x, const Mat& points) {
  double s = 0.0;
  for (int i = 0; i < points.cols(); ++i) s = std::max(s, x(points.col(i)).norm());
  return s;
}

int group_count(const GroupSpec& g) { return static_cast<int>(g.elements().size()); }

}  // namespace

GroupSpec::GroupSpec(int dim, Variant v, std::vector<Mat> elements, std::string label)
    : dim_(dim), variant_(std::move(v)), elements_(std::move(elements)), label_(std::move(label)) {}

GroupSpec GroupSpec::finite(int dim, std::vector<Mat> elements) {
  if (elements.empty()) throw DomainError("finite group: empty element list");
  for (const Mat& g : elements) require_orthogonal(g, dim);
  auto find = [&](const Mat& g) {
    return std::any_of(elements.begin(), elements.end(), [&](const Mat& h) {
      return (h - g).cwiseAbs().maxCoeff() <= kOrthoTol;
    });
  };
  if (!find(Mat::Identity(dim, dim))) throw DomainError("finite group: identity missing");
  for (const Mat& a : elements) {
    for (const Mat& b : elements) {
      if (!find(a * b)) throw DomainError("finite group: not closed under products");
    }
  }
  const std::string label = "finite:" + std::to_string(elements.size());
  FiniteGroup fg{elements};
  return GroupSpec(dim, std::move(fg), std::move(elements), label);
}

GroupSpec GroupSpec::reflection(int dim, int coord) {
  if (coord < 0 || coord >= dim) throw DomainError("reflection: coordinate out of range");
  Mat s = Mat::Identity(dim, dim);
  s(coord, coord) = -1.0;
  std::vector<Mat> elems{Mat::Identity(dim, dim), s};
  return GroupSpec(dim, FiniteGroup{elems}, elems,
                   "finite:reflect:" + std::to_string(coord + 1));
}

GroupSpec GroupSpec::planar_rotations(int dim, int i, int j, int count) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) {
    throw DomainError("planar rotations: invalid coordinate plane");
  }
  if (count < 1) throw DomainError("planar rotations: count must be positive");
  std::vector<Mat> elems;
  for (int t = 0; t < count; ++t) {
    elems.push_back(planar_rotation(dim, i, j, 2.0 * std::numbers::pi * t / count));
  }
  return GroupSpec(dim, PlanarRotations{i, j, count}, std::move(elems),
                   "rot:" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ":" +
                       std::to_string(count));
}

GroupSpec GroupSpec::isotropy(const SphereModel& m, const Vec& v, int count, std::uint64_t seed) {
  if (v.size() != m.ambient_dim()) throw DomainError("isotropy: dimension mismatch");
  m.check_point(v);
  if (count < 1) throw DomainError("isotropy: count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Mat> elems;
  elems.reserve(count);
  for (int t = 0; t < count; ++t) elems.push_back(haar_stabilizer(v, rng));
  return GroupSpec(m.ambient_dim(), IsotropyAt{v, count, seed}, std::move(elems),
                   "isotropy:" + join_coords(v) + ":" + std::to_string(count) +
                       ":seed=" + std::to_string(seed));
}

GroupSpec GroupSpec::haar(int dim, int count, std::uint64_t seed) {
  if (dim < 2) throw DomainError("haar: dimension must be >= 2");
  if (count < 1) throw DomainError("haar: count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Mat> elems;
  elems.reserve(count);
  for (int t = 0; t < count; ++t) elems.push_back(haar_orthogonal(dim, rng));
  return GroupSpec(dim, HaarOrthogonal{count, seed}, std::move(elems),
                   "haar:" + std::to_string(count) + ":seed=" + std::to_string(seed));
}

GroupSpec GroupSpec::isotropy_design(const SphereModel& m, const Vec& v, int degree) {
  if (v.size() != m.ambient_dim()) throw DomainError("isotropy design: dimension mismatch");
  m.check_point(v);
  const int n = m.n();
  std::vector<Mat> local;
  if (n == 2) {
    local = dihedral_group(std::max(8, degree + 2));
  } else if (n == 3) {
    if (degree > 4) throw DomainError("isotropy design: n = 3 supports degree <= 4");
    local = icosahedral_group();
  } else {
    if (degree > 2) throw DomainError("isotropy design: n >= 4 supports degree <= 2");
    if (n > 6) throw DomainError("isotropy design: n <= 6 required");
    local = hyperoctahedral_group(n);
  }
  const Vec u = v.normalized();
  const Mat q = complement_basis(v);
  const Mat fixed = u * u.transpose();
  std::vector<Mat> elems;
  elems.reserve(local.size());
  for (const Mat& h : local) elems.push_back(fixed + q * h * q.transpose());
  return GroupSpec(m.ambient_dim(), FiniteGroup{elems}, elems,
                   "design:" + join_coords(v) + ":" + std::to_string(degree));
}

bool GroupSpec::exact() const {
  return std::holds_alternative<FiniteGroup>(variant_) ||
         std::holds_alternative<PlanarRotations>(variant_);
}

Mat GroupSpec::random_element(std::mt19937_64& rng) const {
  return std::visit(
      [&](const auto& g) -> Mat {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, FiniteGroup>) {
          std::uniform_int_distribution<std::size_t> pick(0, g.elements.size() - 1);
          return g.elements[pick(rng)];
        } else if constexpr (std::is_same_v<T, PlanarRotations>) {
          std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
          return planar_rotation(dim_, g.i, g.j, angle(rng));
        } else if constexpr (std::is_same_v<T, IsotropyAt>) {
          return haar_stabilizer(g.v, rng);
        } else {
          return haar_orthogonal(dim_, rng);
        }
      },
      variant_);
}

Mat haar_orthogonal(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) z(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  const Mat& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Mat haar_stabilizer(const Vec& v, std::mt19937_64& rng) {
  const int dim = static_cast<int>(v.size());
  const Vec u = v.normalized();
  const Mat q = complement_basis(v);
  return u * u.transpose() + q * haar_orthogonal(dim - 1, rng) * q.transpose();
}

// ---------------------------------------------------------------------------

SymmetrizedField symmetrize(const AmbientPolyField& x, const GroupSpec& g) {
  if (x.sphere().ambient_dim() != g.dim()) throw DomainError("symmetrize: dimension mismatch");
  const auto& elems = g.elements();
  Mat sum = pullback_sum(x, elems, 0, elems.size());
  sum /= static_cast<double>(elems.size());
  return {x, g,
          g.exact() ? SymmetrizationMode::ExactPolynomial : SymmetrizationMode::SampledAverage,
          AmbientPolyField(x.sphere(), x.degree(), std::move(sum))};
}

Vec group_average(const FieldFn& y, const GroupSpec& g, const Vec& p) {
  Vec acc = Vec::Zero(p.size());
  for (const Mat& h : g.elements()) acc += h.transpose() * y(h * p);
  return acc / static_cast<double>(g.elements().size());
}

double invariance_defect(const AmbientPolyField& v, const GroupSpec& g, int samples,
                         std::uint64_t seed) {
  if (v.sphere().ambient_dim() != g.dim()) throw DomainError("invariance: dimension mismatch");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    const Mat h = g.random_element(rng);
    const Vec p = random_sphere_point(v.sphere(), rng);
    worst = std::max(worst, (h.transpose() * v.eval(h * p) - v.eval(p)).norm());
  }
  return worst;
}

double invariance_check(const SymmetrizedField& xg, int samples, std::uint64_t seed) {
  return invariance_defect(xg.field, xg.group, samples, seed);
}

double commutation_defect(const AmbientPolyField& x, const GroupSpec& g, const Mat& points) {
  if (!g.exact()) throw DomainError("exact mode required");
  const SymmetrizedField xg = symmetrize(x, g);
  const FieldFn lap = [&](const Vec& p) { return x.rough_laplacian(p); };
  double worst = 0.0;
  for (int i = 0; i < points.cols(); ++i) {
    const Vec p = points.col(i);
    worst = std::max(worst, (group_average(lap, g, p) - xg.field.rough_laplacian(p)).norm());
  }
  return worst;
}

double precondition_tolerance(const GroupSpec& g) {
  return g.exact() ? 1e-8 : 5.0 / std::sqrt(static_cast<double>(group_count(g)));
}

double product_orthogonality(const AmbientPolyField& w, const AmbientPolyField& v,
                             const GroupSpec& g, const QuadratureRule& rule) {
  if (!(w.sphere() == v.sphere()) || !(w.sphere() == rule.sphere)) {
    throw DomainError("product orthogonality: fields on different spheres");
  }
  const double tol = precondition_tolerance(g);
  const FieldFn wf = [&](const Vec& p) { return w.eval(p); };
  const FieldFn vf = [&](const Vec& p) { return v.eval(p); };
  const double v_scale = sup_norm(vf, rule.nodes);
  const double v_defect = invariance_defect(v, g, 64);
  if (v_defect > tol * std::max(v_scale, 1e-300) && v_defect > 0.0) {
    throw PreconditionError("V is not G-invariant", v_defect);
  }
  const SymmetrizedField wg = symmetrize(w, g);
  const double wg_norm = sup_norm([&](const Vec& p) { return wg.eval(p); }, rule.nodes);
  const double w_scale = sup_norm(wf, rule.nodes);
  if (wg_norm > tol * std::max(w_scale, 1e-300) && wg_norm > 0.0) {
    throw PreconditionError("W_G does not vanish", wg_norm);
  }
  return integrate_pairing(wf, vf, rule);
}

double zero_mean_function_check(const AmbientPolyField& x, const Vec& v, const GroupSpec& g,
                                const QuadratureRule& rule) {
  if (v.size() != g.dim() || x.sphere().ambient_dim() != g.dim()) {
    throw DomainError("zero mean check: dimension mismatch");
  }
  for (const Mat& h : g.elements()) {
    if ((h * v - v).norm() > kOrthoTol * std::max(1.0, v.norm())) {
      throw DomainError("zero mean check: group does not fix v");
    }
  }
  const SymmetrizedField xg = symmetrize(x, g);
  const double scale = sup_norm([&](const Vec& p) { return x.eval(p); }, rule.nodes);
  const double xg_norm = sup_norm([&](const Vec& p) { return xg.eval(p); }, rule.nodes);
  if (xg_norm > precondition_tolerance(g) * std::max(scale, 1e-300) && xg_norm > 0.0) {
    throw PreconditionError("X_G does not vanish", xg_norm);
  }
  return integrate_scalar([&](const Vec& p) { return x.eval(p).dot(v); }, rule);
}

double transitive_average(const SphereModel& m, const Vec& u, const Vec& v, int count,
                          std::uint64_t seed) {
  m.check_point(u);
  m.check_point(v);
  if (count < 1) throw DomainError("transitive average: count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<double> terms(count);
  for (int t = 0; t < count; ++t) terms[t] = (haar_orthogonal(m.ambient_dim(), rng) * u).dot(v);
  return tree_sum(terms) / count;
}

OrbitReport orbit_orthogonality_check(const FieldFn& xg, const SphereModel& m, const Vec& v,
                                      const Mat& points) {
  m.check_point(v);
  OrbitReport rep{0.0, 0, 0};
  for (int i = 0; i < points.cols(); ++i) {
    const Vec p = points.col(i);
    const Vec toward = tangent_project(m, p, v);
    const double len = toward.norm();
    if (len < 1e-8 * m.radius()) {
      ++rep.skipped;
      continue;
    }
    const Vec grad_s = -toward / len;
    const Vec x = xg(p);
    rep.max_defect = std::max(rep.max_defect, (x - x.dot(grad_s) * grad_s).norm());
    ++rep.checked;
  }
  return rep;
}

double eigen_defect(const AmbientPolyField& x, double lambda, const Mat& points) {
  double worst = 0.0;
  for (int i = 0; i < points.cols(); ++i) {
    const Vec p = points.col(i);
    worst = std::max(worst, (-x.rough_laplacian(p) - lambda * x.eval(p)).norm());
  }
  return worst;
}

double l2_norm(const FieldFn& x, const QuadratureRule& rule) {
  return std::sqrt(std::max(0.0, integrate_pairing(x, x, rule)));
}

EigenfieldInstance invariant_eigenfield_instance(const GroupSpec& g, const AmbientPolyField& x,
                                                 double lambda, const QuadratureRule& rule,
                                                 const Mat& points) {
  if (!g.exact()) throw DomainError("exact mode required");
  EigenfieldInstance r{};
  r.base_defect = eigen_defect(x, lambda, points);
  if (r.base_defect > 1e-8) {
    throw PreconditionError("X is not an eigenfield for lambda", r.base_defect);
  }
  const SymmetrizedField xg = symmetrize(x, g);
  r.base_norm = l2_norm([&](const Vec& p) { return x.eval(p); }, rule);
  r.symmetrized_norm = l2_norm([&](const Vec& p) { return xg.eval(p); }, rule);
  r.eigen_defect = eigen_defect(xg.field, lambda, points);
  r.annihilated = r.symmetrized_norm <= 1e-8 * r.base_norm;
  return r;
}

Mat random_points(const SphereModel& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Mat pts(m.ambient_dim(), count);
  for (int i = 0; i < count; ++i) pts.col(i) = random_sphere_point(m, rng);
  return pts;
}

}  // namespace rlap
