#pragma once

#include "rlap/eigen_solver.hpp"
#include "rlap/geometry.hpp"

#include <string>
#include <vector>

namespace rlap {

/// Radial fields h(s) grad s on a warped product, discretized on the
/// interior grid s_j = j l / (N+1), j = 1..N, with h = 0 at both poles.
struct RadialProblem {
  WarpedProfile profile;
  int grid;  // N
  double k;  // comparison curvature scale

  RadialProblem(WarpedProfile profile, int grid, double k);

  double step() const { return profile.length() / (grid + 1); }
  double node(int j) const { return (j + 1) * step(); }  // j = 0..N-1
  Vec nodes() const;
};

/// Self-adjoint flux form of the radial eigenproblem
///
///   -(f^{n-1} h')' + (n-1) f^{n-3} (f')^2 h = lambda f^{n-1} h,
///
/// multiplied through by the step: stiffness is symmetric tridiagonal with
/// midpoint coefficients f^{n-1}(s_{j +- 1/2}), mass is f^{n-1}(s_j) ds.
struct RadialSystem {
  Vec stiffness_diag;
  Vec stiffness_off;
  Vec mass;

  /// M^{-1/2} K M^{-1/2}.
  Tridiagonal reduced() const;
  /// h^T K h / h^T M h.
  double quotient(const Vec& h) const;
  Vec apply_stiffness(const Vec& h) const;
};

RadialSystem assemble(const RadialProblem& prob);

struct RadialEigenpair {
  double eigenvalue;
  Vec h;                   // grid values, sum_j h_j^2 f^{n-1}(s_j) ds = 1
  double quotient;         // radial energy of h
  double residual;         // ||(T - lambda) y|| in the reduced problem
};

struct RadialResult {
  Vec nodes;
  std::vector<RadialEigenpair> pairs;  // ascending

  Vec eigenvalues() const;
};

/// The `count` smallest eigenpairs by Sturm bisection plus inverse iteration.
RadialResult solve_smallest(const RadialProblem& prob, int count);

/// Discrete Rayleigh quotient of grid values h (length N, poles implied zero):
///   int [(h')^2 + (n-1)(f'/f)^2 h^2] f^{n-1} / int h^2 f^{n-1}.
double radial_energy(const Vec& h, const WarpedProfile& profile);

/// Pointwise equality diagnostics along the grid for f = phi(s), phi' = h.
struct ReillyReport {
  Vec nodes;
  Vec phi;          // zero-mean primitive of h
  Vec dphi;         // h
  Vec d2phi;        // h'
  Vec defect;       // n[(phi'')^2 + (phi')^2 |B|^2] - [phi'' - (n-1) H phi']^2
  Vec umbilic;      // phi'' + H phi'
  Vec laplacian;    // phi'' - (n-1) H phi'
  double defect_min;
  double defect_max;
  double defect_integral;    // int D f^{n-1} ds
  double umbilic_max;        // max |phi'' + H phi'| on the window
  double eigen_defect_max;   // max |Delta f + n k^2 f| on the window
};

/// Diagnostics on the window s in [window l, (1 - window) l].
ReillyReport reilly_defect(const Vec& h, const WarpedProfile& profile, double k,
                           double window = 0.05);

/// Discretization tolerance on lambda1 - k^2 at the default grid sizes.
inline constexpr double kRadialGapTol = 5e-4;

struct RigidityReport {
  double ric_margin;
  double k;
  double lambda1;
  double gap;  // lambda1 - k^2
  bool round;
  double reilly_min;
  /// gap >= -kRadialGapTol always, and gap <= kRadialGapTol when round.
  bool consistent;
};

/// Refuses with PreconditionError (carrying the margin) when the Ricci lower
/// bound (n-1)k^2 fails on the grid.
RigidityReport rigidity_experiment(const WarpedProfile& profile, double k, int grid);

}  // namespace rlap
