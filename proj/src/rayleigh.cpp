#include "rlap/rayleigh.hpp"

#include "rlap/symmetrize.hpp"

#include <algorithm>
#include <cmath>

namespace rlap {

namespace {

// Per-node evaluations of every field, each block holding one column per field.
struct NodeTable {
  std::vector<Mat> values;      // (n+1) x K
  std::vector<Mat> gradients;   // (n+1) n x K, column blocks nabla_{E_a} X
  std::vector<Mat> laplacians;  // (n+1) x K
};

NodeTable tabulate(const std::vector<AmbientPolyField>& fields, const QuadratureRule& rule,
                   bool with_gradients, bool with_laplacians) {
  const SphereModel& m = rule.sphere;
  const int dim = m.ambient_dim();
  const int n = m.n();
  const int count = static_cast<int>(fields.size());
  for (const auto& x : fields) {
    if (!(x.sphere() == m)) throw DomainError("dictionary field lives on a different sphere");
  }
  NodeTable t;
  t.values.resize(rule.size());
  if (with_gradients) t.gradients.resize(rule.size());
  if (with_laplacians) t.laplacians.resize(rule.size());
  parallel_for(rule.size(), [&](int q) {
    const Vec p = rule.nodes.col(q);
    const Mat frame = orthonormal_frame(m, p);
    Mat v(dim, count);
    Mat g(with_gradients ? dim * n : 0, count);
    Mat l(with_laplacians ? dim : 0, count);
    for (int i = 0; i < count; ++i) {
      v.col(i) = fields[i].eval(p);
      if (with_gradients) g.col(i) = fields[i].covariant_derivatives(p, frame).reshaped();
      if (with_laplacians) l.col(i) = fields[i].rough_laplacian(p, frame);
    }
    if (!v.allFinite() || !g.allFinite() || !l.allFinite()) {
      throw NumericalError("non-finite field value at node " + std::to_string(q));
    }
    t.values[q] = std::move(v);
    if (with_gradients) t.gradients[q] = std::move(g);
    if (with_laplacians) t.laplacians[q] = std::move(l);
  });
  return t;
}

Mat weighted_gram(const std::vector<Mat>& blocks, const Vec& weights) {
  const int k = static_cast<int>(blocks.front().cols());
  Mat acc = Mat::Zero(k, k);
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    acc.noalias() += weights(static_cast<int>(q)) * blocks[q].transpose() * blocks[q];
  }
  return 0.5 * (acc + acc.transpose());
}

}  // namespace

std::vector<AmbientPolyField> candidate_fields(const SphereModel& m, int degree) {
  if (degree < 1 || degree > kMaxFieldDegree) {
    throw DomainError("dictionary degree must be in [1, " + std::to_string(kMaxFieldDegree) + "]");
  }
  const auto basis = MonomialBasis::get(m.ambient_dim(), degree);
  std::vector<AmbientPolyField> out;
  out.reserve(static_cast<std::size_t>(basis->size()) * m.ambient_dim());
  for (int l = 0; l < m.ambient_dim(); ++l) {
    for (int a = 0; a < basis->size(); ++a) {
      out.push_back(AmbientPolyField::monomial(m, l, basis->exponent(a)).with_degree(degree));
    }
  }
  return out;
}

QuadratureRule default_rule(const SphereModel& m, int degree) {
  if (m.n() <= 3) return product_rule(m.n(), m.k(), std::max(8, 2 * degree + 4));
  return monte_carlo_rule(m.n(), m.k(), 40000, 1);
}

Dictionary build_dictionary(const SphereModel& m, int degree) {
  return build_dictionary(m, degree, default_rule(m, degree));
}

Dictionary build_dictionary(const SphereModel& m, int degree, const QuadratureRule& rule) {
  return select_independent(m, degree, candidate_fields(m, degree), rule);
}

Dictionary select_independent(const SphereModel& m, int degree,
                              const std::vector<AmbientPolyField>& candidates,
                              const QuadratureRule& rule) {
  const NodeTable t = tabulate(candidates, rule, false, false);
  const Mat b = weighted_gram(t.values, rule.weights);
  const int count = static_cast<int>(candidates.size());

  std::vector<int> alive;
  for (int i = 0; i < count; ++i) {
    if (std::sqrt(std::max(0.0, b(i, i))) >= kDropTolerance * m.volume()) alive.push_back(i);
  }
  const int na = static_cast<int>(alive.size());
  Vec scale(na);
  for (int i = 0; i < na; ++i) scale(i) = 1.0 / std::sqrt(b(alive[i], alive[i]));
  Mat g(na, na);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) g(i, j) = b(alive[i], alive[j]) * scale(i) * scale(j);

  // pivoted Cholesky on the normalized Gram matrix
  Vec residual = g.diagonal();
  Mat l = Mat::Zero(na, na);
  std::vector<int> chosen;
  std::vector<bool> used(na, false);
  for (int step = 0; step < na; ++step) {
    int piv = -1;
    for (int i = 0; i < na; ++i) {
      if (!used[i] && (piv < 0 || residual(i) > residual(piv))) piv = i;
    }
    if (piv < 0 || residual(piv) < kRankTolerance) break;
    used[piv] = true;
    chosen.push_back(piv);
    const double d = std::sqrt(residual(piv));
    for (int i = 0; i < na; ++i) {
      if (used[i] && i != piv) continue;
      double s = g(i, piv);
      for (int c = 0; c < step; ++c) s -= l(i, c) * l(piv, c);
      l(i, step) = s / d;
      if (i != piv) residual(i) -= l(i, step) * l(i, step);
    }
  }
  std::sort(chosen.begin(), chosen.end());

  Dictionary out{m, degree, count, {}, {}};
  for (int i : chosen) {
    AmbientPolyField f = candidates[alive[i]];
    f *= scale(i);
    out.fields.push_back(std::move(f));
    out.source.push_back(alive[i]);
  }
  return out;
}

GramPair gram_matrices(const std::vector<AmbientPolyField>& fields, const QuadratureRule& rule) {
  if (fields.empty()) throw DomainError("gram matrices: empty field list");
  const NodeTable t = tabulate(fields, rule, true, false);
  return {weighted_gram(t.gradients, rule.weights), weighted_gram(t.values, rule.weights)};
}

GramPair gram_matrices(const Dictionary& d, const QuadratureRule& rule) {
  return gram_matrices(d.fields, rule);
}

Mat cross_mass(const std::vector<AmbientPolyField>& xs, const std::vector<AmbientPolyField>& ys,
               const QuadratureRule& rule) {
  const NodeTable tx = tabulate(xs, rule, false, false);
  const NodeTable ty = tabulate(ys, rule, false, false);
  Mat acc = Mat::Zero(static_cast<int>(xs.size()), static_cast<int>(ys.size()));
  for (int q = 0; q < rule.size(); ++q) {
    acc.noalias() += rule.weights(q) * tx.values[q].transpose() * ty.values[q];
  }
  return acc;
}

SpectralResult ritz(const std::vector<AmbientPolyField>& fields, const QuadratureRule& rule,
                    const std::optional<Mat>& subspace) {
  if (fields.empty()) throw DomainError("ritz: empty field list");
  const NodeTable t = tabulate(fields, rule, true, true);
  Mat a = weighted_gram(t.gradients, rule.weights);
  Mat b = weighted_gram(t.values, rule.weights);
  if (subspace) {
    a = subspace->transpose() * a * *subspace;
    b = subspace->transpose() * b * *subspace;
  }
  SpectralResult r = solve_generalized(0.5 * (a + a.transpose()), 0.5 * (b + b.transpose()));
  if (subspace) r.vectors = *subspace * r.vectors;

  r.residuals = Vec(r.eigenvalues.size());
  for (int j = 0; j < r.eigenvalues.size(); ++j) {
    const Vec c = r.vectors.col(j);
    const double lambda = r.eigenvalues(j);
    std::vector<double> terms(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      terms[q] = rule.weights(q) * (t.laplacians[q] * c + lambda * (t.values[q] * c)).squaredNorm();
    }
    r.residuals(j) = std::sqrt(tree_sum(terms));
  }
  return r;
}

double min_energy(const SphereModel& m, int degree) {
  return min_energy(m, degree, default_rule(m, degree));
}

double min_energy(const SphereModel& m, int degree, const QuadratureRule& rule) {
  const Dictionary d = build_dictionary(m, degree, rule);
  const GramPair g = gram_matrices(d, rule);
  return solve_generalized(g.stiffness, g.mass).eigenvalues(0);
}

InvariantGap invariant_subspace_min(const SphereModel& m, const QuadratureRule& rule, int degree) {
  if (m.n() != 3) throw DomainError("invariant subspace minimum requires n = 3");
  const std::vector<AmbientPolyField> hopf{AmbientPolyField::hopf(m, 'i'),
                                           AmbientPolyField::hopf(m, 'j'),
                                           AmbientPolyField::hopf(m, 'k')};
  const GramPair g = gram_matrices(hopf, rule);
  return {min_energy(m, degree, rule), solve_generalized(g.stiffness, g.mass).eigenvalues(0),
          g.mass};
}

int multiplicity_report(const SpectralResult& result, double lambda, double tol) {
  int count = 0;
  for (int i = 0; i < result.eigenvalues.size(); ++i) {
    if (std::abs(result.eigenvalues(i) - lambda) <= tol) ++count;
  }
  return count;
}

Mat orthogonal_complement(const std::vector<AmbientPolyField>& fields,
                          const std::vector<AmbientPolyField>& invariant,
                          const QuadratureRule& rule) {
  const int k = static_cast<int>(fields.size());
  const Mat b = gram_matrices(fields, rule).mass;
  const Mat l = cholesky_lower(b);
  if (invariant.empty()) {
    return l.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(k, k));
  }
  // coordinates of the invariant fields' projections in a B-orthonormal basis
  const Mat c = cross_mass(fields, invariant, rule);
  const Mat coords = l.triangularView<Eigen::Lower>().solve(c);
  Eigen::JacobiSVD<Mat> svd(coords, Eigen::ComputeFullU);
  const Vec& sv = svd.singularValues();
  int rank = 0;
  const double cut = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  const Mat perp = svd.matrixU().rightCols(k - rank);
  return l.transpose().triangularView<Eigen::Upper>().solve(perp);
}

SpectralResult zero_mean_spectrum(const Dictionary& d, const std::vector<Vec>& centers,
                                  const QuadratureRule& rule) {
  std::vector<AmbientPolyField> invariant;
  for (const Vec& v : centers) {
    const GroupSpec g = GroupSpec::isotropy_design(d.sphere, v, d.degree);
    for (const auto& x : d.fields) invariant.push_back(symmetrize(x, g).field);
  }
  const Mat z = orthogonal_complement(d.fields, invariant, rule);
  if (z.cols() == 0) throw NumericalError("zero-mean subspace is empty");
  return ritz(d.fields, rule, z);
}

AmbientPolyField ritz_field(const std::vector<AmbientPolyField>& fields, const Vec& c) {
  return linear_combination(fields, c);
}

double subspace_angle(const AmbientPolyField& y, const std::vector<AmbientPolyField>& basis,
                      const QuadratureRule& rule) {
  const Mat bb = gram_matrices(basis, rule).mass;
  const Vec cross = cross_mass(basis, {y}, rule).col(0);
  const double ny = cross_mass({y}, {y}, rule)(0, 0);
  if (!(ny > 0.0)) throw NumericalError("subspace angle: zero-norm field");
  const double captured = cross.dot(bb.ldlt().solve(cross));
  const double s2 = std::clamp(1.0 - captured / ny, 0.0, 1.0);
  return std::asin(std::sqrt(s2));
}

}  // namespace rlap
