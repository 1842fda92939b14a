#pragma once

#include "rlap/config.hpp"

#include <ostream>

namespace rlap {

inline constexpr const char* kSchemaVersion = "rlap-report/1";

/// Ritz spectrum of the degree-d dictionary, optionally restricted to the
/// Hopf span or to fields of zero isotropy mean at a center.
json cmd_spectrum(const RunConfig& cfg);

/// Smallest radial eigenpairs plus the rigidity experiment. When cfg.csv is
/// set the grid table is written there with 17 significant digits.
json cmd_radial(const RunConfig& cfg);

/// Writes the radial grid table (header line, then one row per node).
void write_radial_csv(std::ostream& os, const RunConfig& cfg);

json cmd_symmetrize(const RunConfig& cfg);

/// Runs the acceptance criteria; "passed" is false when any fails.
json cmd_verify(const RunConfig& cfg);

/// Dispatches on cfg.command after validation. Usage errors propagate as
/// ConfigError; numerical and precondition failures become an error record.
json run_command(const RunConfig& cfg);

/// Structured error record for a failed run.
json error_record(const std::string& kind, const std::string& message, const RunConfig& cfg);

}  // namespace rlap
