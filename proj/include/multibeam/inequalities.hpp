#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "multibeam/beams.hpp"

namespace multibeam {

inline constexpr double kSaturationTol = 1e-10;

/// Evaluated inequality lhs <= bound.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // bound - lhs
  bool saturated = false;
  std::vector<std::pair<std::string, double>> terms;

  double term(const std::string& key) const;
};

InequalityReport make_report(std::string name, double lhs, double bound);

/// Two-beam contrast relation: traditional visibility^2 + |zeta_1 - zeta_2|^2 <= 1.
/// Saturation is reported from purity (|Tr rho^2 - 1| <= 1e-10).
InequalityReport greenberger_yasin(const BeamState& s);

/// V^2 + P^2 <= 1 with the generalized visibility and predictability.
InequalityReport duality_check(const BeamState& s);

/// Tr rho^m <= 1 for 2 <= m <= n.
InequalityReport trace_power_check(const BeamState& s, int m);

/// Three-beam m = 3 trace inequality in matrix-element form
///   sum zeta^3 + 3 sum_i zeta_i sum_{j!=i} |I_ij|^2 + 3 (I12 I23 I31 + c.c.) <= 1
/// and in measurable form, with pairwise visibilities and the phase-averaged
/// third moment. Both forms are listed in `terms`; lhs is the matrix form.
InequalityReport three_beam_expanded(const BeamState& s);

enum class StateFamily { pure, full_rank, mixed };

struct CheckTally {
  int evaluated = 0;
  int saturated = 0;
  int violations = 0;  // slack < -1e-10
  double min_slack = 0.0;
};

struct AuditSummary {
  int n = 0;
  int trials = 0;
  double min_slack = 0.0;
  double max_violation = 0.0;  // max(0, -slack) over all reports
  int violations = 0;
  std::map<std::string, CheckTally> checks;

  bool ok() const { return violations == 0; }
  void record(const InequalityReport& r);
};

/// Runs every applicable check on `trials` random states.
/// `mixed` alternates pure and full-rank states.
AuditSummary audit_random(int n, int trials, StateFamily family, Rng& rng);

/// All applicable checks for a single state.
std::vector<InequalityReport> audit_state(const BeamState& s);

}  // namespace multibeam
