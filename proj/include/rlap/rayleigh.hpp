#pragma once

#include "rlap/eigen_solver.hpp"
#include "rlap/fields.hpp"
#include "rlap/quadrature.hpp"

#include <optional>
#include <vector>

namespace rlap {

/// Trial space of unit-L2 polynomial fields with a positive definite Gram
/// matrix.
struct Dictionary {
  SphereModel sphere;
  int degree;
  int candidate_count;              // fields considered before filtering
  std::vector<AmbientPolyField> fields;
  std::vector<int> source;          // candidate index of each retained field

  int size() const { return static_cast<int>(fields.size()); }
};

/// Tangential parts of e_l x^a for every output coordinate l and every
/// monomial |a| <= degree, grouped by output coordinate.
std::vector<AmbientPolyField> candidate_fields(const SphereModel& m, int degree);

/// Product rule with res = max(8, 2 degree + 4) for n <= 3; Monte Carlo otherwise.
QuadratureRule default_rule(const SphereModel& m, int degree);

inline constexpr double kDropTolerance = 1e-8;    // L2 norm relative to Vol
inline constexpr double kRankTolerance = 1e-10;   // pivoted Gram, relative pivot

/// Drops near-zero candidates, normalizes the rest and keeps a maximal
/// independent subset by pivoted Cholesky of the Gram matrix.
Dictionary build_dictionary(const SphereModel& m, int degree);
Dictionary build_dictionary(const SphereModel& m, int degree, const QuadratureRule& rule);
Dictionary select_independent(const SphereModel& m, int degree,
                              const std::vector<AmbientPolyField>& candidates,
                              const QuadratureRule& rule);

struct GramPair {
  Mat stiffness;  // A_ij = int <nabla X_i, nabla X_j>
  Mat mass;       // B_ij = int <X_i, X_j>
};

GramPair gram_matrices(const std::vector<AmbientPolyField>& fields, const QuadratureRule& rule);
GramPair gram_matrices(const Dictionary& d, const QuadratureRule& rule);

/// C_ij = int <X_i, Y_j>.
Mat cross_mass(const std::vector<AmbientPolyField>& xs, const std::vector<AmbientPolyField>& ys,
               const QuadratureRule& rule);

/// Ritz pairs of the span of `fields`, with L2 eigen-defects as residuals.
/// `subspace`, when given, restricts to combinations fields * Z.
SpectralResult ritz(const std::vector<AmbientPolyField>& fields, const QuadratureRule& rule,
                    const std::optional<Mat>& subspace = std::nullopt);

/// Smallest Ritz value over the degree-d dictionary.
double min_energy(const SphereModel& m, int degree);
double min_energy(const SphereModel& m, int degree, const QuadratureRule& rule);

struct InvariantGap {
  double full;        // minimum over the whole dictionary
  double invariant;   // minimum over span{Hopf i, j, k}
  Mat invariant_mass; // Gram matrix of the three Hopf fields
};

/// n = 3 only.
InvariantGap invariant_subspace_min(const SphereModel& m, const QuadratureRule& rule,
                                    int degree = 1);

/// Number of Ritz values within tol of lambda.
int multiplicity_report(const SpectralResult& result, double lambda, double tol);

/// Basis (columns) of the combinations c with int <sum c_i X_i, S> = 0 for
/// every field S in `invariant`.
Mat orthogonal_complement(const std::vector<AmbientPolyField>& fields,
                          const std::vector<AmbientPolyField>& invariant,
                          const QuadratureRule& rule);

/// Ritz problem on the fields of zero G-mean for the isotropy groups of every
/// center: the B-orthogonal complement of the symmetrized dictionary.
SpectralResult zero_mean_spectrum(const Dictionary& d, const std::vector<Vec>& centers,
                                  const QuadratureRule& rule);

/// Field sum_i c_i X_i.
AmbientPolyField ritz_field(const std::vector<AmbientPolyField>& fields, const Vec& c);

/// L2 angle (radians) between `y` and the span of `basis`.
double subspace_angle(const AmbientPolyField& y, const std::vector<AmbientPolyField>& basis,
                      const QuadratureRule& rule);

}  // namespace rlap
