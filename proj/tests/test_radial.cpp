#include "rlap/radial.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rlap;

TEST(RadialSystem, SymmetricPositiveMass) {
  const RadialSystem sys = assemble(RadialProblem(WarpedProfile::perturbed(3, 1.0, 0.04), 200, 1.0));
  EXPECT_EQ(sys.stiffness_diag.size(), 200);
  EXPECT_EQ(sys.stiffness_off.size(), 199);
  EXPECT_TRUE((sys.mass.array() > 0).all());
  const Tridiagonal t = sys.reduced();
  EXPECT_EQ(t.size(), 200);
  // symmetric by construction: h^T K g = g^T K h
  Vec h = Vec::LinSpaced(200, 0.0, 1.0).array().sin();
  Vec g = Vec::LinSpaced(200, 1.0, 3.0).array().cos();
  EXPECT_NEAR(h.dot(sys.apply_stiffness(g)), g.dot(sys.apply_stiffness(h)), 1e-10);
}

TEST(RadialProblem, Validation) {
  EXPECT_THROW(RadialProblem(WarpedProfile::round(2, 1.0), 63, 1.0), DomainError);
  EXPECT_THROW(RadialProblem(WarpedProfile::round(2, 1.0), 100, 0.0), DomainError);
  EXPECT_THROW(solve_smallest(RadialProblem(WarpedProfile::round(2, 1.0), 100, 1.0), 11), DomainError);
  EXPECT_THROW(radial_energy(Vec::Zero(100), WarpedProfile::round(2, 1.0)), NumericalError);
}

TEST(Radial, RoundGroundStateAndQuotient) {
  for (int n : {2, 3, 5}) {
    for (double k : {1.0, 2.0}) {
      const RadialProblem prob(WarpedProfile::round(n, k), 2000, k);
      const RadialResult res = solve_smallest(prob, 3);
      const double t_norm = assemble(prob).reduced().diag.cwiseAbs().maxCoeff();
      EXPECT_NEAR(res.pairs[0].eigenvalue, k * k, kRadialGapTol * k * k);
      for (const auto& p : res.pairs) {
        EXPECT_NEAR(p.quotient, p.eigenvalue, 1e-8 * std::max(1.0, p.eigenvalue));
        EXPECT_LT(p.residual, 1e-10 * t_norm);
      }
      EXPECT_LT(res.pairs[0].eigenvalue, res.pairs[1].eigenvalue);
      EXPECT_LT(res.pairs[1].eigenvalue, res.pairs[2].eigenvalue);
    }
  }
}

TEST(Radial, SecondOrderConvergence) {
  const WarpedProfile w = WarpedProfile::round(3, 1.0);
  double prev = 0.0;
  for (int grid : {199, 399, 799}) {
    const double err = std::abs(solve_smallest(RadialProblem(w, grid, 1.0), 1).pairs[0].eigenvalue - 1.0);
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / err), 2.0, 0.2);
    prev = err;
  }
}

TEST(Radial, EigenvectorsNormalizedAndOrthogonal) {
  const RadialProblem prob(WarpedProfile::perturbed(2, 1.0, 0.03), 500, 1.0);
  const RadialSystem sys = assemble(prob);
  const RadialResult res = solve_smallest(prob, 4);
  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    for (std::size_t j = 0; j < res.pairs.size(); ++j) {
      const double ip = (res.pairs[i].h.array() * res.pairs[j].h.array() * sys.mass.array()).sum();
      EXPECT_NEAR(ip, i == j ? 1.0 : 0.0, 1e-9);
    }
  }
  EXPECT_NEAR(radial_energy(res.pairs[0].h, prob.profile), res.pairs[0].eigenvalue, 1e-8);
}

TEST(Reilly, RoundIsUmbilicEigenfunction) {
  const WarpedProfile w = WarpedProfile::round(3, 1.0);
  const RadialResult res = solve_smallest(RadialProblem(w, 2000, 1.0), 1);
  const ReillyReport rep = reilly_defect(res.pairs[0].h, w, 1.0);
  EXPECT_LT(rep.umbilic_max, 1e-3);
  EXPECT_LT(rep.eigen_defect_max, 1e-3);
  EXPECT_GE(rep.defect_min, -1e-3);
  EXPECT_LT(std::abs(rep.defect_max), 1e-2);
  // zero weighted mean of phi
  const RadialSystem sys = assemble(RadialProblem(w, 2000, 1.0));
  EXPECT_NEAR((rep.phi.array() * sys.mass.array()).sum(), 0.0, 1e-10);
}

TEST(Reilly, DefectNonNegativePerturbed) {
  const WarpedProfile w = WarpedProfile::perturbed(3, 1.0, 0.05);
  const RadialResult res = solve_smallest(RadialProblem(w, 1000, 1.0), 1);
  const ReillyReport rep = reilly_defect(res.pairs[0].h, w, 1.0);
  EXPECT_GE(rep.defect_min, -1e-6 * std::max(1.0, rep.defect_max));
}

TEST(Rigidity, RoundIsConsistent) {
  const RigidityReport rep = rigidity_experiment(WarpedProfile::round(3, 1.0), 1.0, 2000);
  EXPECT_TRUE(rep.round);
  EXPECT_TRUE(rep.consistent);
  EXPECT_NEAR(rep.gap, 0.0, kRadialGapTol);
}

TEST(Rigidity, RefusesWhenRicciBoundFails) {
  try {
    rigidity_experiment(WarpedProfile::round(3, 1.0), 1.1, 1000);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_LT(e.measured(), 0.0);
  }
}

TEST(Rigidity, PerturbedAtAdmissibleScale) {
  const WarpedProfile w = WarpedProfile::perturbed(2, 1.0, 0.05);
  const double k = largest_admissible_k(w, 2000) * (1 - 1e-12);
  const RigidityReport rep = rigidity_experiment(w, k, 2000);
  EXPECT_FALSE(rep.round);
  EXPECT_TRUE(rep.consistent);
  EXPECT_GT(rep.gap, kRadialGapTol);
}
