#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "multibeam/optimizer.hpp"

namespace multibeam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parsed `optimize` configuration.
struct OptimizeConfig {
  BeamState beam;
  DetectorStates detector;
  Measure measure = Measure::knowledge;
  SearchOptions search;
};

/// Reads
///   { "beam": {"rho": [[[re, im], ...], ...]},
///     "detector": {"bloch": [[x, y, z], ...]} | {"vectors": [[[re, im], ...], ...]},
///     "measure": "K" | "Ktilde", "max_elements": int, "restarts": int }
/// Unknown keys, malformed values and unphysical states throw
/// Error(InvalidConfig).
OptimizeConfig parse_optimize_config(std::string_view text);

/// %.12g
std::string format_number(double v);

/// Runs the command line; args[0] is the program name. Data goes to `out`,
/// diagnostics to `err`. Returns 0, 1 (computational failure) or 2 (usage).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multibeam::cli
