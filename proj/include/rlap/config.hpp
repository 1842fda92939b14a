#pragma once

#include "rlap/fields.hpp"
#include "rlap/geometry.hpp"
#include "rlap/quadrature.hpp"
#include "rlap/symmetrize.hpp"

#include "json.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlap {

using json = nlohmann::ordered_json;

/// Invalid run configuration; names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::string command = "spectrum";  // spectrum | radial | symmetrize | verify
  int n = 2;
  double k = 1.0;
  int degree = 3;

  std::string quad = "auto";  // auto | product | mc
  int res = 0;                // product rule resolution, 0 = default
  int count = 100000;         // Monte Carlo node count
  std::uint64_t seed = 1;

  std::string restrict_to;     // spectrum: "", "hopf", "zero-mean:v1,...,v_{n+1}"
  std::string profile = "round:k=1";
  int grid = 2000;
  int eigs = 3;
  std::string field;           // symmetrize
  std::string group;           // symmetrize
  int samples = 200;           // random points / group draws for pointwise checks
  std::vector<int> criteria;   // verify: empty = all
  std::string output;          // JSON report path, empty = stdout only
  std::string csv;             // radial: grid CSV path

  json to_json() const;
  static RunConfig from_json(const json& j);
  /// Throws ConfigError naming the first out-of-range field.
  void validate() const;
};

/// `round:k=1`, `perturbed:k=1,eps=0.05`, `file:PATH`.
WarpedProfile parse_profile(const std::string& text, int n);

/// `proj:w1,...`, `killing:xy` or `killing:1,2`, `hopf:i`, `poly:PATH`.
AmbientPolyField parse_field(const std::string& text, const SphereModel& m);

/// `finite:reflect:C`, `rot:I,J:M`, `isotropy:v1,...:COUNT[:seed=S]`,
/// `haar:COUNT[:seed=S]`, `design:v1,...:DEGREE`. Coordinates are 1-based;
/// centers are rescaled onto the sphere.
GroupSpec parse_group(const std::string& text, const SphereModel& m);

/// Quadrature selected by quad/res/count/seed for fields of the given degree.
QuadratureRule make_rule(const RunConfig& cfg, const SphereModel& m, int degree);

/// Comma-separated numbers.
Vec parse_vector(const std::string& text, const std::string& field);

}  // namespace rlap
