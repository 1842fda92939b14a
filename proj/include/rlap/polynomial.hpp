#pragma once

#include "rlap/types.hpp"

#include <memory>
#include <vector>

namespace rlap {

using Exponent = std::vector<int>;

/// All monomials x^a in `vars` variables with |a| <= degree, in graded
/// order (degree 0 first). Immutable; shared through `get`.
class MonomialBasis {
 public:
  MonomialBasis(int vars, int degree);

  /// Cached instance per (vars, degree).
  static std::shared_ptr<const MonomialBasis> get(int vars, int degree);

  int vars() const { return vars_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const Exponent& exponent(int idx) const { return exponents_[idx]; }
  int total_degree(int idx) const { return total_[idx]; }
  /// First index of the monomials of total degree `d` (d <= degree + 1).
  int degree_offset(int d) const { return offsets_[d]; }

  /// Index of an exponent, or -1 when it is not in the basis.
  int index(const Exponent& a) const;
  /// Index of x^a * x_var, or -1 when that exceeds the degree.
  int times_var(int idx, int var) const { return times_[idx * vars_ + var]; }
  /// Index of x^a / x_var, or -1 when a_var == 0.
  int divided_by(int idx, int var) const { return divided_[idx * vars_ + var]; }

  /// Monomial values at x.
  Vec values(const Vec& x) const;

  /// Values, gradients and (optionally) Hessians of every monomial at x.
  struct Jet {
    Vec value;  // M
    Mat grad;   // M x vars
    Mat hess;   // M x vars*vars, entry (a, j*vars + l) = d^2 x^a / dx_j dx_l
  };
  Jet jet(const Vec& x, bool with_hessian) const;

 private:
  int vars_;
  int degree_;
  std::vector<Exponent> exponents_;
  std::vector<int> total_;
  std::vector<int> offsets_;
  std::vector<int> times_;
  std::vector<int> divided_;
};

/// Coefficients (one column per output coordinate) of P(g x) where P has
/// coefficients `coeffs` over `basis`. Degree is preserved.
Mat substitute_linear(const MonomialBasis& basis, const Mat& coeffs, const Mat& g);

/// Re-expresses coefficients over a basis of higher degree.
Mat promote(const MonomialBasis& from, const MonomialBasis& to, const Mat& coeffs);

}  // namespace rlap
