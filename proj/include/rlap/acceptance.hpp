#pragma once

#include <string>
#include <vector>

namespace rlap {

/// One compared quantity. `relation` is "<", ">" or "info" (reported only).
struct Measurement {
  std::string name;
  double value;
  std::string relation;
  double bound;
  std::string reference;  // "closed_form" or "oracle"

  bool passed() const;
};

struct CriterionResult {
  int id;
  std::string title;
  std::string claim;
  std::vector<Measurement> measurements;
  std::string error;  // non-empty when the run itself failed

  bool passed() const;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id);

/// Runs the given criteria (all when empty) in id order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

/// `PASS  3  hopf gap ...` style line.
std::string summary_line(const CriterionResult& r);

}  // namespace rlap
