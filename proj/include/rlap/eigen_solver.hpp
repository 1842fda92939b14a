#pragma once

#include "rlap/types.hpp"

#include <vector>

namespace rlap {

/// Ascending eigenvalues with B-orthonormal coefficient vectors (columns).
struct SpectralResult {
  Vec eigenvalues;
  Mat vectors;
  Vec residuals;  // L2 eigen-defect per Ritz field; empty when not computed
};

/// Lower Cholesky factor L with B = L L^T. Throws NumericalError("mass matrix
/// not positive definite") on a non-positive pivot.
Mat cholesky_lower(const Mat& b);

struct JacobiResult {
  Vec values;   // ascending
  Mat vectors;  // orthonormal columns
  int sweeps;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// tol * ||A||_F.
JacobiResult jacobi_eigen(const Mat& a, double tol = 1e-12, int max_sweeps = 100);

/// A x = lambda B x by Cholesky reduction to L^{-1} A L^{-T} and Jacobi.
SpectralResult solve_generalized(const Mat& a, const Mat& b);

/// Symmetric tridiagonal matrix.
struct Tridiagonal {
  Vec diag;  // size N
  Vec off;   // size N-1, off(i) couples i and i+1

  int size() const { return static_cast<int>(diag.size()); }
};

/// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
int sturm_count(const Tridiagonal& t, double x);

/// The `index`-th smallest eigenvalue (0-based) by bisection.
double tridiagonal_eigenvalue(const Tridiagonal& t, int index, double rel_tol = 1e-15);

struct InverseIterationResult {
  Vec vector;  // unit 2-norm
  double residual;
  int iterations;
};

/// Eigenvector for an accurate eigenvalue estimate, orthogonalized against
/// `deflate` (previously found unit vectors). Throws NumericalError when the
/// residual ||(T - lambda) v|| stays above tol * ||T|| after max_iter steps.
InverseIterationResult inverse_iteration(const Tridiagonal& t, double lambda,
                                         const std::vector<Vec>& deflate = {},
                                         double tol = 1e-10, int max_iter = 50);

}  // namespace rlap
