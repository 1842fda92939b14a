#include "rlap/radial.hpp"

#include <algorithm>
#include <cmath>

namespace rlap {

RadialProblem::RadialProblem(WarpedProfile p, int n_grid, double k_)
    : profile(std::move(p)), grid(n_grid), k(k_) {
  if (grid < 64) throw DomainError("radial problem: grid must be >= 64");
  if (!(k > 0.0)) throw DomainError("radial problem: k must be positive");
}

Vec RadialProblem::nodes() const {
  Vec s(grid);
  for (int j = 0; j < grid; ++j) s(j) = node(j);
  return s;
}

Tridiagonal RadialSystem::reduced() const {
  const int n = static_cast<int>(mass.size());
  Tridiagonal t{Vec(n), Vec(std::max(0, n - 1))};
  for (int j = 0; j < n; ++j) t.diag(j) = stiffness_diag(j) / mass(j);
  for (int j = 0; j + 1 < n; ++j) t.off(j) = stiffness_off(j) / std::sqrt(mass(j) * mass(j + 1));
  return t;
}

Vec RadialSystem::apply_stiffness(const Vec& h) const {
  const int n = static_cast<int>(mass.size());
  Vec y = stiffness_diag.cwiseProduct(h);
  for (int j = 0; j + 1 < n; ++j) {
    y(j) += stiffness_off(j) * h(j + 1);
    y(j + 1) += stiffness_off(j) * h(j);
  }
  return y;
}

double RadialSystem::quotient(const Vec& h) const {
  const double den = h.dot(mass.cwiseProduct(h));
  if (!(den > 0.0)) throw NumericalError("radial energy: zero-norm grid function");
  return h.dot(apply_stiffness(h)) / den;
}

RadialSystem assemble(const RadialProblem& prob) {
  const int n_grid = prob.grid;
  const int n = prob.profile.n();
  const double ds = prob.step();

  // flux coefficients at the N+1 half points s_{j+1/2}, j = 0..N
  Vec flux(n_grid + 1);
  for (int j = 0; j <= n_grid; ++j) {
    const double s = (j + 0.5) * ds;
    const double f = prob.profile.f(s);
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw NumericalError("profile evaluation failed at s = " + std::to_string(s));
    }
    flux(j) = std::pow(f, n - 1);
  }
  RadialSystem sys{Vec(n_grid), Vec(n_grid - 1), Vec(n_grid)};
  for (int j = 0; j < n_grid; ++j) {
    const double s = prob.node(j);
    const ProfileJet jet = prob.profile.jet(s);
    if (!(jet.f > 0.0) || !std::isfinite(jet.f) || !std::isfinite(jet.df)) {
      throw NumericalError("profile evaluation failed at s = " + std::to_string(s));
    }
    const double potential = (n - 1) * std::pow(jet.f, n - 3) * jet.df * jet.df;
    sys.stiffness_diag(j) = (flux(j) + flux(j + 1)) / ds + potential * ds;
    sys.mass(j) = std::pow(jet.f, n - 1) * ds;
    if (j + 1 < n_grid) sys.stiffness_off(j) = -flux(j + 1) / ds;
  }
  return sys;
}

Vec RadialResult::eigenvalues() const {
  Vec v(static_cast<int>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) v(static_cast<int>(i)) = pairs[i].eigenvalue;
  return v;
}

RadialResult solve_smallest(const RadialProblem& prob, int count) {
  if (count < 1 || count > 10) throw DomainError("solve_smallest: count must be in [1, 10]");
  const RadialSystem sys = assemble(prob);
  const Tridiagonal t = sys.reduced();
  const Vec sqrt_mass = sys.mass.cwiseSqrt();

  RadialResult out{prob.nodes(), {}};
  std::vector<Vec> found;
  for (int i = 0; i < count; ++i) {
    const double lambda = tridiagonal_eigenvalue(t, i);
    const InverseIterationResult it = inverse_iteration(t, lambda, found);
    found.push_back(it.vector);
    // y = M^{1/2} h with |y| = 1 gives sum h^2 f^{n-1} ds = 1
    Vec h = it.vector.cwiseQuotient(sqrt_mass);
    // positive first lobe
    const double peak = h.cwiseAbs().maxCoeff();
    for (int j = 0; j < h.size(); ++j) {
      if (std::abs(h(j)) > 1e-3 * peak) {
        if (h(j) < 0.0) h = -h;
        break;
      }
    }
    out.pairs.push_back({lambda, h, sys.quotient(h), it.residual});
  }
  return out;
}

double radial_energy(const Vec& h, const WarpedProfile& profile) {
  const RadialProblem prob(profile, static_cast<int>(h.size()), 1.0);
  return assemble(prob).quotient(h);
}

ReillyReport reilly_defect(const Vec& h, const WarpedProfile& profile, double k, double window) {
  const int n_grid = static_cast<int>(h.size());
  const RadialProblem prob(profile, n_grid, k);
  const int n = profile.n();
  const double ds = prob.step();

  ReillyReport r;
  r.nodes = prob.nodes();
  r.dphi = h;
  r.d2phi = Vec(n_grid);
  for (int j = 0; j < n_grid; ++j) {
    const double left = j > 0 ? h(j - 1) : 0.0;
    const double right = j + 1 < n_grid ? h(j + 1) : 0.0;
    r.d2phi(j) = (right - left) / (2.0 * ds);
  }
  // primitive by the trapezoid rule from the pole, then zero weighted mean
  r.phi = Vec(n_grid);
  double acc = 0.0;
  double prev = 0.0;
  Vec weight(n_grid);
  for (int j = 0; j < n_grid; ++j) {
    acc += 0.5 * (prev + h(j)) * ds;
    prev = h(j);
    r.phi(j) = acc;
    weight(j) = std::pow(profile.f(r.nodes(j)), n - 1);
  }
  r.phi.array() -= r.phi.dot(weight) / weight.sum();

  r.defect = Vec(n_grid);
  r.umbilic = Vec(n_grid);
  r.laplacian = Vec(n_grid);
  r.defect_min = std::numeric_limits<double>::infinity();
  r.defect_max = -std::numeric_limits<double>::infinity();
  r.defect_integral = 0.0;
  r.umbilic_max = 0.0;
  r.eigen_defect_max = 0.0;
  const double lo = window * profile.length();
  const double hi = (1.0 - window) * profile.length();
  for (int j = 0; j < n_grid; ++j) {
    const double s = r.nodes(j);
    const double hc = mean_curvature(profile, s);
    const double b2 = second_fundamental_norm_sq(profile, s);
    const double d1 = r.dphi(j);
    const double d2 = r.d2phi(j);
    const double lap = d2 - (n - 1) * hc * d1;
    r.laplacian(j) = lap;
    r.umbilic(j) = d2 + hc * d1;
    r.defect(j) = n * (d2 * d2 + d1 * d1 * b2) - lap * lap;
    r.defect_integral += r.defect(j) * weight(j) * ds;
    if (s < lo || s > hi) continue;
    r.defect_min = std::min(r.defect_min, r.defect(j));
    r.defect_max = std::max(r.defect_max, r.defect(j));
    r.umbilic_max = std::max(r.umbilic_max, std::abs(r.umbilic(j)));
    r.eigen_defect_max = std::max(r.eigen_defect_max, std::abs(lap + n * k * k * r.phi(j)));
  }
  return r;
}

RigidityReport rigidity_experiment(const WarpedProfile& profile, double k, int grid) {
  const RicciCheck gate = ricci_lower_bound_check(profile, k, std::max(grid, 16));
  if (!gate.passed) {
    throw PreconditionError("Ricci lower bound (n-1)k^2 not met; margin " +
                                std::to_string(gate.margin),
                            gate.margin);
  }
  const RadialResult res = solve_smallest(RadialProblem(profile, grid, k), 1);
  const ReillyReport reilly = reilly_defect(res.pairs[0].h, profile, k);
  RigidityReport rep;
  rep.ric_margin = gate.margin;
  rep.k = k;
  rep.lambda1 = res.pairs[0].eigenvalue;
  rep.gap = rep.lambda1 - k * k;
  rep.round = profile.is_round(k);
  rep.reilly_min = reilly.defect_min;
  rep.consistent = rep.gap >= -kRadialGapTol && (!rep.round || rep.gap <= kRadialGapTol);
  return rep;
}

}  // namespace rlap
