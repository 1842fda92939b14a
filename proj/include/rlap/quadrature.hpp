#pragma once

#include "rlap/geometry.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace rlap {

enum class RuleKind { Product, MonteCarlo };

/// Nodes on S^n(1/k) with positive weights summing to the volume.
struct QuadratureRule {
  SphereModel sphere;
  Mat nodes;    // (n+1) x count, one node per column
  Vec weights;  // volume units
  RuleKind kind = RuleKind::Product;
  int resolution = 0;         // product rules
  std::uint64_t seed = 0;     // Monte Carlo rules

  int size() const { return static_cast<int>(weights.size()); }
  Vec node(int i) const { return nodes.col(i); }
  std::string describe() const;
};

/// n = 2: Gauss-Legendre in cos(theta) (res nodes) x trapezoid in azimuth
/// (2 res nodes). n = 3: additionally Gauss-Chebyshev (second kind) in
/// cos(psi) for the sin^2(psi) density, res nodes. Exact for ambient
/// polynomials of degree <= 2 res - 1.
QuadratureRule product_rule(int n, double k, int res);

/// Normalized Gaussian vectors, equal weights Vol/count.
QuadratureRule monte_carlo_rule(int n, double k, int count, std::uint64_t seed);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

/// Pairwise summation in a fixed order; bitwise reproducible.
double tree_sum(std::span<const double> values);

using ScalarFn = std::function<double(const Vec&)>;
using FieldFn = std::function<Vec(const Vec&)>;

double integrate_scalar(const ScalarFn& g, const QuadratureRule& rule);

/// Integral of <X, Y> over the sphere.
double integrate_pairing(const FieldFn& x, const FieldFn& y, const QuadratureRule& rule);

/// Evaluates `fn(i)` for every node index across worker threads (count taken
/// from RLAP_WORKERS, default 1). Output order is fixed, so any reduction on
/// the result is independent of the worker count.
std::vector<double> map_nodes(int count, const std::function<double(int)>& fn);

/// Runs fn(i) for i in [0, count) on the same worker pool as map_nodes.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace rlap
