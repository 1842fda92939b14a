#include "rlap/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace rlap;

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

// Second difference of f, the oracle for curvature formulas.
struct FiniteDifferenceProfile {
  const WarpedProfile& w;
  double h = 1e-4;
  double d1(double s) const { return (w.f(s + h) - w.f(s - h)) / (2 * h); }
  double d2(double s) const { return (w.f(s + h) - 2 * w.f(s) + w.f(s - h)) / (h * h); }
};

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(SphereModel, RejectsBadParameters) {
  EXPECT_THROW(SphereModel(1, 1.0), DomainError);
  EXPECT_THROW(SphereModel(2, 0.0), DomainError);
  EXPECT_THROW(SphereModel(2, -1.0), DomainError);
}

TEST(SphereModel, VolumeMatchesClosedForms) {
  EXPECT_NEAR(SphereModel(2, 1.0).volume(), 4 * kPi, 1e-12);
  EXPECT_NEAR(SphereModel(3, 1.0).volume(), 2 * kPi * kPi, 1e-12);
  EXPECT_NEAR(SphereModel(2, 2.0).volume(), kPi, 1e-12);
  EXPECT_NEAR(SphereModel(4, 1.0).volume(), 8.0 * kPi * kPi / 3.0, 1e-12);
}

TEST(SphereModel, PointTolerance) {
  const SphereModel m(2, 2.0);
  EXPECT_NO_THROW(m.check_point(vec3(0, 0, 0.5)));
  EXPECT_NO_THROW(m.check_point(vec3(0, 0, 0.5 * (1 + 5e-13))));
  EXPECT_THROW(m.check_point(vec3(0, 0, 0.5 * (1 + 1e-10))), DomainError);
  EXPECT_THROW(m.check_point(Vec::Zero(4)), DomainError);
}

TEST(TangentProject, Examples) {
  const SphereModel s1(2, 1.0);
  EXPECT_LT((tangent_project(s1, vec3(0, 0, 1), vec3(0, 0, 5))).norm(), 1e-15);
  EXPECT_LT((tangent_project(s1, vec3(0, 0, 1), vec3(3, 0, 0)) - vec3(3, 0, 0)).norm(), 1e-15);
  const SphereModel s2(2, 2.0);
  EXPECT_LT((tangent_project(s2, vec3(0, 0, 0.5), vec3(1, 0, 1)) - vec3(1, 0, 0)).norm(), 1e-15);
  EXPECT_THROW(tangent_project(s1, vec3(0, 0, 2), vec3(1, 0, 0)), DomainError);
}

TEST(TangentProject, ProjectorIsSymmetricIdempotent) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int n = 2; n <= 5; ++n) {
    const SphereModel m(n, 1.7);
    Vec p(n + 1);
    for (int i = 0; i <= n; ++i) p(i) = normal(rng);
    p *= m.radius() / p.norm();
    const Mat proj = tangent_projector(m, p);
    EXPECT_LT((proj * proj - proj).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((proj - proj.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(OrthonormalFrame, NorthPole) {
  const Mat f = orthonormal_frame(SphereModel(2, 1.0), vec3(0, 0, 1));
  ASSERT_EQ(f.cols(), 2);
  EXPECT_LT((f.col(0) - vec3(1, 0, 0)).norm(), 1e-15);
  EXPECT_LT((f.col(1) - vec3(0, 1, 0)).norm(), 1e-15);
}

TEST(OrthonormalFrame, OrthonormalAndTangentEverywhere) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int n = 2; n <= 5; ++n) {
    const SphereModel m(n, 0.7);
    for (int t = 0; t < 50; ++t) {
      Vec p(n + 1);
      for (int i = 0; i <= n; ++i) p(i) = normal(rng);
      if (t == 0) p = Vec::Unit(n + 1, 0);  // a coordinate axis
      p *= m.radius() / p.norm();
      const Mat f = orthonormal_frame(m, p);
      ASSERT_EQ(f.cols(), n);
      EXPECT_LT((f.transpose() * f - Mat::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((f.transpose() * p).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(TangentVector, Tangency) {
  EXPECT_TRUE((TangentVector{vec3(0, 0, 1), vec3(1, 2, 0)}.is_tangent()));
  EXPECT_FALSE((TangentVector{vec3(0, 0, 1), vec3(1, 2, 1e-6)}.is_tangent()));
}

TEST(WarpedProfile, RoundInvariants) {
  const WarpedProfile w = WarpedProfile::round(3, 2.0);
  EXPECT_NEAR(w.length(), kPi / 2.0, 1e-15);
  EXPECT_NEAR(w.f(0.0), 0.0, 1e-15);
  EXPECT_NEAR(w.jet(0.0).df, 1.0, 1e-15);
  EXPECT_NEAR(w.jet(w.length()).df, -1.0, 1e-15);
  EXPECT_TRUE(w.is_round(2.0));
  EXPECT_FALSE(w.is_round(1.0));
  EXPECT_EQ(w.describe(), "round:k=2");
}

TEST(WarpedProfile, PerturbedIsNotRound) {
  const WarpedProfile w = WarpedProfile::perturbed(2, 1.0, 0.05);
  EXPECT_FALSE(w.is_round(1.0));
  EXPECT_NEAR(w.f(kPi / 2), 1.05, 1e-15);
  EXPECT_EQ(w.describe(), "perturbed:k=1,eps=0.05");
}

TEST(WarpedProfile, TabulatedRoundDerivativeAccuracy) {
  std::vector<double> s(512), f(512);
  for (int i = 0; i < 512; ++i) {
    s[i] = kPi * i / 511.0;
    f[i] = std::sin(s[i]);
  }
  f.back() = 0.0;
  const WarpedProfile w = WarpedProfile::tabulated(2, s, f);
  double err = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = kPi * i / 1000.0;
    err = std::max(err, std::abs(w.jet(x).df - std::cos(x)));
    err = std::max(err, std::abs(w.f(x) - std::sin(x)));
  }
  EXPECT_LE(err, 1e-6);
}

TEST(WarpedProfile, TabulatedValidation) {
  std::vector<double> s(32), f(32);
  EXPECT_THROW(WarpedProfile::tabulated(2, s, f), DomainError);
  std::vector<double> s2(100), f2(100);
  for (int i = 0; i < 100; ++i) {
    s2[i] = 0.1 + i * 0.01;
    f2[i] = 1.0;
  }
  EXPECT_THROW(WarpedProfile::tabulated(2, s2, f2), DomainError);
  // f does not close up
  for (int i = 0; i < 100; ++i) {
    s2[i] = kPi * i / 99.0;
    f2[i] = std::sin(s2[i]) + 0.1 * s2[i];
  }
  EXPECT_THROW(WarpedProfile::tabulated(2, s2, f2), DomainError);
}

TEST(WarpedProfile, CsvFile) {
  std::string body = "s,f\n";
  for (int i = 0; i < 200; ++i) {
    const double s = kPi * i / 199.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s, i == 199 ? 0.0 : std::sin(s));
    body += buf;
  }
  const WarpedProfile w = WarpedProfile::from_csv(2, write_temp("rlap_round.csv", body));
  EXPECT_NEAR(w.length(), kPi, 1e-15);
  EXPECT_NEAR(w.f(1.0), std::sin(1.0), 1e-7);

  EXPECT_THROW(WarpedProfile::from_csv(2, write_temp("rlap_bad.csv", "x,y\n0,0\n")), DomainError);
  EXPECT_THROW(WarpedProfile::from_csv(2, "/nonexistent/profile.csv"), DomainError);
}

TEST(Curvature, MeanCurvatureExamples) {
  EXPECT_NEAR(mean_curvature(WarpedProfile::round(2, 1.0), kPi / 2), 0.0, 1e-15);
  EXPECT_NEAR(mean_curvature(WarpedProfile::round(2, 1.0), kPi / 4), -1.0, 1e-15);
  EXPECT_NEAR(mean_curvature(WarpedProfile::round(2, 2.0), kPi / 8), -2.0, 1e-14);
}

TEST(Curvature, SecondFundamentalFormExamples) {
  EXPECT_NEAR(second_fundamental_norm_sq(WarpedProfile::round(3, 1.0), kPi / 4), 2.0, 1e-14);
  for (int n = 2; n <= 6; ++n) {
    EXPECT_NEAR(second_fundamental_norm_sq(WarpedProfile::round(n, 1.0), kPi / 2), 0.0, 1e-30);
  }
}

TEST(Curvature, OpenIntervalOnly) {
  const WarpedProfile w = WarpedProfile::round(2, 1.0);
  EXPECT_THROW(mean_curvature(w, 0.0), DomainError);
  EXPECT_THROW(mean_curvature(w, kPi), DomainError);
  EXPECT_THROW(second_fundamental_norm_sq(w, -0.1), DomainError);
  EXPECT_THROW(ricci(w, 4.0), DomainError);
}

TEST(Curvature, UmbilicityProperty) {
  std::mt19937_64 rng(8);
  for (const WarpedProfile& w : {WarpedProfile::round(4, 1.3), WarpedProfile::perturbed(3, 1.0, 0.07),
                                 WarpedProfile::perturbed(5, 2.0, -0.02)}) {
    std::uniform_real_distribution<double> u(1e-3 * w.length(), (1 - 1e-3) * w.length());
    for (int t = 0; t < 100; ++t) {
      const double s = u(rng);
      const double h = mean_curvature(w, s);
      EXPECT_NEAR(second_fundamental_norm_sq(w, s), (w.n() - 1) * h * h,
                  1e-12 * std::max(1.0, h * h));
      const auto pc = principal_curvatures(w, s);
      ASSERT_EQ(static_cast<int>(pc.size()), w.n() - 1);
      EXPECT_NEAR(umbilic_discriminant(pc), 0.0, 1e-12 * std::max(1.0, h * h));
    }
  }
}

TEST(Curvature, DiscriminantNonPositive) {
  EXPECT_LT(umbilic_discriminant({1.0, 2.0, 0.5}), 0.0);
  EXPECT_NEAR(umbilic_discriminant({0.3, 0.3}), 0.0, 1e-16);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> l(4);
    for (auto& x : l) x = normal(rng);
    EXPECT_LE(umbilic_discriminant(l), 1e-15);
  }
}

TEST(Ricci, RoundExamples) {
  const auto r3 = ricci(WarpedProfile::round(3, 1.0), 0.7);
  EXPECT_NEAR(r3.radial, 2.0, 1e-12);
  EXPECT_NEAR(r3.tangential, 2.0, 1e-12);
  const auto r2 = ricci(WarpedProfile::round(2, 2.0), 0.3);
  EXPECT_NEAR(r2.radial, 4.0, 1e-12);
  EXPECT_NEAR(r2.tangential, 4.0, 1e-12);
}

TEST(Ricci, RoundConsistencyOnManyPoints) {
  for (int n : {2, 3, 5}) {
    const double k = 1.5;
    const WarpedProfile w = WarpedProfile::round(n, k);
    for (int i = 1; i <= 1000; ++i) {
      const double s = w.length() * i / 1001.0;
      EXPECT_NEAR(mean_curvature(w, s), -k / std::tan(k * s), 1e-10 * std::max(1.0, k / std::tan(k * s)));
      const auto r = ricci(w, s);
      EXPECT_NEAR(r.radial, (n - 1) * k * k, 1e-10);
      EXPECT_NEAR(r.tangential, (n - 1) * k * k, 1e-8);
    }
  }
}

TEST(Ricci, PerturbedMatchesFiniteDifferenceOracle) {
  for (int n : {2, 3, 4}) {
    const WarpedProfile w = WarpedProfile::perturbed(n, 1.0, 0.05);
    const FiniteDifferenceProfile fd{w};
    for (double s : {kPi / 2, 0.4, 2.5}) {
      const double f = w.f(s);
      const double radial = -(n - 1) * fd.d2(s) / f;
      const double tangential = -fd.d2(s) / f + (n - 2) * (1 - fd.d1(s) * fd.d1(s)) / (f * f);
      const auto r = ricci(w, s);
      EXPECT_NEAR(r.radial, radial, 1e-6);
      EXPECT_NEAR(r.tangential, tangential, 1e-6);
    }
  }
}

TEST(Ricci, LowerBoundCheck) {
  const WarpedProfile w = WarpedProfile::round(3, 1.0);
  const RicciCheck ok = ricci_lower_bound_check(w, 1.0, 64);
  EXPECT_TRUE(ok.passed);
  EXPECT_NEAR(ok.margin, 0.0, 1e-9);
  EXPECT_FALSE(ricci_lower_bound_check(w, 1.1, 64).passed);
  EXPECT_THROW(ricci_lower_bound_check(w, 1.0, 8), DomainError);
}

TEST(Ricci, PerturbedCheckMatchesOracle) {
  const int grid = 200;
  for (double eps : {0.01, -0.01, 0.05}) {
    const WarpedProfile w = WarpedProfile::perturbed(3, 1.0, eps);
    const FiniteDifferenceProfile fd{w};
    double lo = 1e300;
    for (int j = 1; j <= grid; ++j) {
      const double s = j * w.length() / (grid + 1);
      const double f = w.f(s);
      lo = std::min({lo, -2 * fd.d2(s) / f, -fd.d2(s) / f + (1 - fd.d1(s) * fd.d1(s)) / (f * f)});
    }
    for (double k : {0.5, 0.9, 1.0}) {
      const RicciCheck c = ricci_lower_bound_check(w, k, grid);
      EXPECT_NEAR(c.min_ricci, lo, 1e-4);
      if (std::abs(lo - 2 * k * k) > 1e-3) EXPECT_EQ(c.passed, lo >= 2 * k * k);
    }
    EXPECT_NEAR(largest_admissible_k(w, grid), std::sqrt(lo / 2), 1e-4);
  }
}
