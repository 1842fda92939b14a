#pragma once

#include "rlap/fields.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace rlap {

/// Explicit list of orthogonal matrices, closed under products, containing
/// the identity.
struct FiniteGroup {
  std::vector<Mat> elements;
};

/// Rotations of the (i, j) coordinate plane (0-based) by 2 pi t / count.
struct PlanarRotations {
  int i;
  int j;
  int count;
};

/// Seeded Haar samples of the stabilizer of v in O(n+1).
struct IsotropyAt {
  Vec v;
  int count;
  std::uint64_t seed;
};

/// Seeded Haar samples of the full orthogonal group O(n+1).
struct HaarOrthogonal {
  int count;
  std::uint64_t seed;
};

/// Compact group acting on R^{n+1} by orthogonal matrices. Averages use the
/// normalized measure (total mass 1).
class GroupSpec {
 public:
  using Variant = std::variant<FiniteGroup, PlanarRotations, IsotropyAt, HaarOrthogonal>;

  /// Validates orthogonality, closure (1e-10) and presence of the identity.
  static GroupSpec finite(int dim, std::vector<Mat> elements);
  /// {I, reflection negating coordinate `coord`} (0-based).
  static GroupSpec reflection(int dim, int coord);
  static GroupSpec planar_rotations(int dim, int i, int j, int count);
  static GroupSpec isotropy(const SphereModel& m, const Vec& v, int count, std::uint64_t seed);
  static GroupSpec haar(int dim, int count, std::uint64_t seed);
  /// A finite subgroup of the stabilizer of v whose average agrees with the
  /// Haar average of the full stabilizer on fields of degree <= `degree`:
  /// dihedral for n = 2, the full icosahedral group for n = 3 (degree <= 4),
  /// signed permutations for n >= 4 (degree <= 2).
  static GroupSpec isotropy_design(const SphereModel& m, const Vec& v, int degree);

  int dim() const { return dim_; }
  const Variant& variant() const { return variant_; }
  /// Finite and planar-rotation groups average exactly; the others sample.
  bool exact() const;
  /// The matrices the average runs over (the seeded samples in sampled modes).
  const std::vector<Mat>& elements() const { return elements_; }
  /// A random element of the underlying compact group (continuous circle for
  /// planar rotations, fresh Haar draws for sampled groups).
  Mat random_element(std::mt19937_64& rng) const;
  /// Group mini-language form, e.g. `rot:1,2:16` (coordinates 1-based).
  const std::string& describe() const { return label_; }

 private:
  GroupSpec(int dim, Variant v, std::vector<Mat> elements, std::string label);

  int dim_;
  Variant variant_;
  std::vector<Mat> elements_;
  std::string label_;
};

/// Haar-distributed element of O(dim) (QR of a Gaussian matrix, sign-fixed).
Mat haar_orthogonal(int dim, std::mt19937_64& rng);

/// Haar element of the stabilizer of v in O(dim).
Mat haar_stabilizer(const Vec& v, std::mt19937_64& rng);

enum class SymmetrizationMode { ExactPolynomial, SampledAverage };

/// X_G(p) = average over G of g^{-1} X(g p), itself a polynomial field.
struct SymmetrizedField {
  AmbientPolyField base;
  GroupSpec group;
  SymmetrizationMode mode;
  AmbientPolyField field;

  Vec eval(const Vec& p) const { return field.eval(p); }
};

SymmetrizedField symmetrize(const AmbientPolyField& x, const GroupSpec& g);

/// Pointwise (g^{-1} Y(g p)) average for an arbitrary field function.
Vec group_average(const FieldFn& y, const GroupSpec& g, const Vec& p);

/// max over sampled (g, p) of |g^{-1} X_G(g p) - X_G(p)|.
double invariance_check(const SymmetrizedField& xg, int samples, std::uint64_t seed = 1);
double invariance_defect(const AmbientPolyField& v, const GroupSpec& g, int samples,
                         std::uint64_t seed = 1);

/// max over points of |(div nabla X)_G - div nabla (X_G)|; exact modes only.
double commutation_defect(const AmbientPolyField& x, const GroupSpec& g, const Mat& points);

/// Precondition tolerance for "vanishes" / "is invariant", relative to the
/// field's sup norm: 1e-8 in exact modes, 5/sqrt(count) when sampled.
double precondition_tolerance(const GroupSpec& g);

/// int <W, V> after checking that V is G-invariant and W_G vanishes. Throws
/// PreconditionError when either hypothesis fails.
double product_orthogonality(const AmbientPolyField& w, const AmbientPolyField& v,
                             const GroupSpec& g, const QuadratureRule& rule);

/// int <X(p), v> dp after checking X_G = 0 for an isotropy group of v.
double zero_mean_function_check(const AmbientPolyField& x, const Vec& v, const GroupSpec& g,
                                const QuadratureRule& rule);

/// Empirical mean of <h u, v> over Haar samples h of O(n+1).
double transitive_average(const SphereModel& m, const Vec& u, const Vec& v, int count,
                          std::uint64_t seed);

struct OrbitReport {
  double max_defect;  // component of X_G tangent to the geodesic sphere about v
  int checked;
  int skipped;        // points at +-v where grad s is undefined
};

OrbitReport orbit_orthogonality_check(const FieldFn& xg, const SphereModel& m, const Vec& v,
                                      const Mat& points);

struct EigenfieldInstance {
  double base_norm;         // ||X||_{L2}
  double symmetrized_norm;  // ||X_G||_{L2}
  double base_defect;       // sup |-div nabla X - lambda X|
  double eigen_defect;      // sup |-div nabla X_G - lambda X_G|
  bool annihilated;         // X_G vanishes: symmetrization annihilates this field
};

/// Symmetrizes an eigenfield over an exact group and re-certifies it.
EigenfieldInstance invariant_eigenfield_instance(const GroupSpec& g, const AmbientPolyField& x,
                                                 double lambda, const QuadratureRule& rule,
                                                 const Mat& points);

/// Sup norm of -div nabla X - lambda X over the given points.
double eigen_defect(const AmbientPolyField& x, double lambda, const Mat& points);

/// sqrt(int |X|^2).
double l2_norm(const FieldFn& x, const QuadratureRule& rule);

/// `count` uniform random points on the sphere, one per column.
Mat random_points(const SphereModel& m, int count, std::uint64_t seed);

}  // namespace rlap
