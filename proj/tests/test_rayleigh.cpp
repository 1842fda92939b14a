#include "rlap/rayleigh.hpp"
#include "rlap/symmetrize.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace rlap;

namespace {

int numerical_rank(const Mat& gram, double rel) {
  const Eigen::JacobiSVD<Mat> svd(gram);
  const Vec s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i) r += s(i) > rel * s(0);
  return r;
}

Mat oracle_gram(const std::vector<AmbientPolyField>& fs, const QuadratureRule& rule) {
  const int m = static_cast<int>(fs.size());
  Mat g(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      g(i, j) = integrate_pairing([&](const Vec& p) { return fs[i].eval(p); },
                                  [&](const Vec& p) { return fs[j].eval(p); }, rule);
    }
  }
  return g;
}

}  // namespace

TEST(Dictionary, CandidateCounts) {
  for (int n : {2, 3, 4}) {
    for (int d = 1; d <= 3; ++d) {
      const auto c = candidate_fields(SphereModel(n, 1.0), d);
      long binom = 1;
      for (int i = 1; i <= d; ++i) binom = binom * (n + 1 + i) / i;
      EXPECT_EQ(static_cast<long>(c.size()), (n + 1) * binom);
    }
  }
  EXPECT_THROW(build_dictionary(SphereModel(2, 1.0), 0), DomainError);
  EXPECT_THROW(build_dictionary(SphereModel(2, 1.0), 7), DomainError);
}

TEST(Dictionary, LinearRankMatchesOracle) {
  const SphereModel m(2, 1.0);
  const Dictionary d = build_dictionary(m, 1);
  EXPECT_EQ(d.candidate_count, 12);
  const int oracle = numerical_rank(oracle_gram(candidate_fields(m, 1), product_rule(2, 1.0, 20)), 1e-10);
  EXPECT_EQ(oracle, 11);
  EXPECT_EQ(d.size(), oracle);
}

TEST(Dictionary, PositionFieldDropped) {
  const SphereModel m(3, 2.0);
  const QuadratureRule rule = product_rule(3, 2.0, 8);
  std::vector<AmbientPolyField> cands;
  for (int l = 0; l < 4; ++l) {
    Exponent a(4, 0);
    a[l] = 1;
    cands.push_back(AmbientPolyField::monomial(m, l, a));
  }
  const AmbientPolyField position = linear_combination(cands, Vec::Ones(4));
  cands.insert(cands.begin(), position);
  const Dictionary d = select_independent(m, 1, cands, rule);
  EXPECT_EQ(std::count(d.source.begin(), d.source.end(), 0), 0);
}

TEST(Dictionary, RetainedFieldsUnitNormAndWellConditioned) {
  const SphereModel m(2, 1.0);
  const QuadratureRule rule = default_rule(m, 3);
  const Dictionary d = build_dictionary(m, 3, rule);
  const GramPair g = gram_matrices(d, rule);
  for (int i = 0; i < d.size(); ++i) EXPECT_NEAR(g.mass(i, i), 1.0, 1e-12);
  const Eigen::SelfAdjointEigenSolver<Mat> es(g.mass);
  EXPECT_GT(es.eigenvalues()(0), 1e-10);
  EXPECT_TRUE(std::is_sorted(d.source.begin(), d.source.end()));
}

TEST(Gram, SymmetricAndSemidefinite) {
  const SphereModel m(3, 1.0);
  const QuadratureRule rule = default_rule(m, 2);
  const GramPair g = gram_matrices(build_dictionary(m, 2, rule), rule);
  EXPECT_LT((g.stiffness - g.stiffness.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((g.mass - g.mass.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat>(g.stiffness).eigenvalues()(0), -1e-9);
}

TEST(Gram, ProjectionAndKillingBlocks) {
  for (double k : {1.0, 1.5}) {
    const SphereModel m(2, k);
    const QuadratureRule rule = product_rule(2, k, 8);
    std::vector<AmbientPolyField> proj, kill;
    for (int i = 0; i < 3; ++i) proj.push_back(AmbientPolyField::projection(m, Vec::Unit(3, i)));
    kill.push_back(AmbientPolyField::killing_plane(m, 0, 1));
    kill.push_back(AmbientPolyField::killing_plane(m, 0, 2));
    kill.push_back(AmbientPolyField::killing_plane(m, 1, 2));
    const GramPair p = gram_matrices(proj, rule);
    EXPECT_LT((p.stiffness - k * k * p.mass).cwiseAbs().maxCoeff(), 1e-12);
    const GramPair q = gram_matrices(kill, rule);
    EXPECT_LT((q.stiffness - k * k * q.mass).cwiseAbs().maxCoeff(), 1e-12);  // (n-1) k^2 with n = 2
  }
}

TEST(Ritz, MinimumEnergyExamples) {
  EXPECT_NEAR(min_energy(SphereModel(2, 1.0), 3), 1.0, 1e-6);
  EXPECT_NEAR(min_energy(SphereModel(3, 2.0), 2), 4.0, 1e-6);
  EXPECT_NEAR(min_energy(SphereModel(3, 1.0), 1), 1.0, 1e-6);
}

TEST(Ritz, MonotoneInDegree) {
  const SphereModel m(2, 1.3);
  const QuadratureRule rule = default_rule(m, 4);
  double prev = 1e300;
  for (int d = 1; d <= 4; ++d) {
    const double e = min_energy(m, d, rule);
    EXPECT_LE(e, prev + 1e-10);
    EXPECT_GE(e, 1.3 * 1.3 - 1e-6);
    prev = e;
  }
}

TEST(Ritz, HopfGap) {
  const SphereModel m(3, 1.0);
  const QuadratureRule rule = default_rule(m, 1);
  const InvariantGap gap = invariant_subspace_min(m, rule);
  EXPECT_NEAR(gap.full, 1.0, 1e-8);
  EXPECT_NEAR(gap.invariant, 2.0, 1e-8);
  const double vol = 2 * std::numbers::pi * std::numbers::pi;
  EXPECT_LT((gap.invariant_mass - vol * Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(invariant_subspace_min(SphereModel(2, 1.0), product_rule(2, 1.0, 8)), DomainError);
}

TEST(Ritz, Multiplicities) {
  const SphereModel s2(2, 1.0);
  const QuadratureRule r2 = default_rule(s2, 3);
  const SpectralResult a = ritz(build_dictionary(s2, 3, r2).fields, r2);
  EXPECT_GE(multiplicity_report(a, 1.0, 1e-4), 6);
  EXPECT_EQ(multiplicity_report(a, 0.5, 1e-4), 0);
  for (int n : {2, 3}) {
    const double k = 0.8;
    const SphereModel m(n, k);
    const QuadratureRule rule = default_rule(m, 2);
    const SpectralResult r = ritz(build_dictionary(m, 2, rule).fields, rule);
    EXPECT_GE(multiplicity_report(r, k * k, 1e-4 * k * k), n + 1);
  }
}

TEST(Ritz, BOrthonormalAndResidualCertificates) {
  const SphereModel m(3, 1.0);
  const QuadratureRule rule = default_rule(m, 2);
  const Dictionary d = build_dictionary(m, 2, rule);
  const SpectralResult r = ritz(d.fields, rule);
  const GramPair g = gram_matrices(d, rule);
  const int cols = static_cast<int>(r.vectors.cols());
  EXPECT_LT((r.vectors.transpose() * g.mass * r.vectors - Mat::Identity(cols, cols)).cwiseAbs().maxCoeff(), 1e-8);
  ASSERT_EQ(r.residuals.size(), r.eigenvalues.size());
  for (int i = 0; i < r.eigenvalues.size(); ++i) {
    EXPECT_GE(r.eigenvalues(i), -1e-9);
    if (std::abs(r.eigenvalues(i) - 1.0) < 1e-6 || std::abs(r.eigenvalues(i) - 2.0) < 1e-6) {
      EXPECT_LT(r.residuals(i), 1e-5);
    }
  }
  // independent residual: the Ritz field is a genuine eigenfield
  const AmbientPolyField y = ritz_field(d.fields, r.vectors.col(0));
  const double defect = l2_norm(
      [&](const Vec& p) { return Vec(y.rough_laplacian(p) + r.eigenvalues(0) * y.eval(p)); }, rule);
  EXPECT_NEAR(defect, r.residuals(0), 1e-8);
}

TEST(Ritz, ReorderInvariance) {
  const SphereModel m(2, 1.0);
  const QuadratureRule rule = default_rule(m, 2);
  std::vector<AmbientPolyField> fields = build_dictionary(m, 2, rule).fields;
  const Vec before = ritz(fields, rule).eigenvalues;
  std::mt19937_64 rng(5);
  std::shuffle(fields.begin(), fields.end(), rng);
  const Vec after = ritz(fields, rule).eigenvalues;
  ASSERT_EQ(before.size(), after.size());
  EXPECT_LT((before - after).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Ritz, SubspaceRestriction) {
  const SphereModel m(2, 1.0);
  const QuadratureRule rule = default_rule(m, 1);
  const Dictionary d = build_dictionary(m, 1, rule);
  std::vector<AmbientPolyField> proj;
  for (int i = 0; i < 3; ++i) proj.push_back(AmbientPolyField::projection(m, Vec::Unit(3, i)));
  for (const auto& p : proj) EXPECT_LT(subspace_angle(p, d.fields, rule), 1e-7);
  const Mat z = orthogonal_complement(d.fields, proj, rule);
  EXPECT_EQ(z.cols(), d.size() - 3);
  const Mat c = cross_mass(d.fields, proj, rule);
  EXPECT_LT((z.transpose() * c).cwiseAbs().maxCoeff(), 1e-10);
  const SpectralResult r = ritz(d.fields, rule, z);
  EXPECT_EQ(r.eigenvalues.size(), d.size() - 3);
  EXPECT_EQ(multiplicity_report(r, 1.0, 1e-6), 3);  // the Killing fields remain
}

TEST(Ritz, ZeroMeanSpectrumOnTwoSphere) {
  const SphereModel m(2, 1.0);
  const QuadratureRule rule = default_rule(m, 2);
  const Dictionary d = build_dictionary(m, 2, rule);
  const SpectralResult r = zero_mean_spectrum(d, {Vec::Unit(3, 2)}, rule);
  EXPECT_GE(r.eigenvalues(0), 1.0 - 1e-4);
}

TEST(Ritz, SubspaceAngleErrors) {
  const SphereModel m(2, 1.0);
  const QuadratureRule rule = default_rule(m, 1);
  EXPECT_THROW(subspace_angle(AmbientPolyField::zero(m), build_dictionary(m, 1, rule).fields, rule),
               NumericalError);
  EXPECT_THROW(ritz({}, rule), DomainError);
  EXPECT_THROW(gram_matrices(std::vector<AmbientPolyField>{}, rule), DomainError);
}
