#include "multibeam/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "multibeam/error.hpp"

namespace multibeam {

double InequalityReport::term(const std::string& key) const {
  for (const auto& [k, v] : terms)
    if (k == key) return v;
  throw Error(ErrorCode::OutOfRange, "no term named " + key);
}

InequalityReport make_report(std::string name, double lhs, double bound) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.bound = bound;
  r.slack = bound - lhs;
  r.saturated = std::abs(r.slack) <= kSaturationTol;
  return r;
}

InequalityReport greenberger_yasin(const BeamState& s) {
  if (s.beam_count() != 2) throw Error(ErrorCode::WrongBeamCount, "needs exactly two beams");
  const double contrast = traditional_visibility(s).value;
  const double pred = std::abs(s.population(0) - s.population(1));
  const double purity = s.purity();
  auto r = make_report("greenberger_yasin", contrast * contrast + pred * pred, 1.0);
  r.saturated = std::abs(purity - 1.0) <= kSaturationTol;
  r.terms = {{"traditional_visibility", contrast}, {"predictability", pred}, {"purity", purity}};
  return r;
}

InequalityReport duality_check(const BeamState& s) {
  const double v = generalized_visibility(s);
  const double p = generalized_predictability(s);
  auto r = make_report("duality", v * v + p * p, 1.0);
  r.terms = {{"V2", v * v}, {"P2", p * p}, {"purity", s.purity()}};
  return r;
}

InequalityReport trace_power_check(const BeamState& s, int m) {
  if (m < 2 || m > s.beam_count()) {
    throw Error(ErrorCode::OutOfRange, "trace power must satisfy 2 <= m <= n");
  }
  const double value = trace_power(s.rho(), m);
  auto r = make_report("trace_power_" + std::to_string(m), value, 1.0);
  r.terms = {{"trace_power", value}, {"positive", value > 0.0 ? 1.0 : 0.0}};
  return r;
}

InequalityReport three_beam_expanded(const BeamState& s) {
  if (s.beam_count() != 3) throw Error(ErrorCode::WrongBeamCount, "needs exactly three beams");
  const CMatrix& rho = s.rho();

  double cubes = 0.0;
  double mixed = 0.0;
  double mixed_measurable = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double zi = s.population(i);
    cubes += zi * zi * zi;
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      mixed += zi * std::norm(rho(i, j));
      const double vij = pairwise_visibility(s, i, j);
      mixed_measurable += zi * vij * vij;
    }
  }
  mixed *= 3.0;
  mixed_measurable *= 0.75;
  const double triple = 3.0 * 2.0 * (rho(0, 1) * rho(1, 2) * rho(2, 0)).real();
  const double matrix_sum = cubes + mixed + triple;

  // <I> = 1/3 for any state.
  const double mean_cubed = 1.0 / 27.0;
  const double moment_ratio = phase_moment(s, 3, MomentMethod::quadrature) / mean_cubed;
  const double moment_term = 3.0 * kTripleProductPerMomentRatio * moment_ratio;
  const double measurable_sum = cubes + mixed_measurable + moment_term;
  const double literal_sum = cubes + mixed_measurable + 3.0 * moment_ratio;

  auto r = make_report("trace_power_3_expanded", matrix_sum, 1.0);
  r.terms = {
      {"population_cubes", cubes},
      {"population_coherence", mixed},
      {"triple_product", triple},
      {"matrix_sum", matrix_sum},
      {"trace_rho3", trace_power(rho, 3)},
      {"pairwise_visibility_term", mixed_measurable},
      {"third_moment_ratio", moment_ratio},
      {"moment_term", moment_term},
      {"measurable_sum", measurable_sum},
      {"moment_term_unit_coefficient", 3.0 * moment_ratio},
      {"measurable_sum_unit_coefficient", literal_sum},
  };
  return r;
}

void AuditSummary::record(const InequalityReport& r) {
  auto& tally = checks[r.name];
  if (tally.evaluated == 0) tally.min_slack = std::numeric_limits<double>::infinity();
  ++tally.evaluated;
  if (r.saturated) ++tally.saturated;
  tally.min_slack = std::min(tally.min_slack, r.slack);
  min_slack = std::min(min_slack, r.slack);
  if (r.slack < -kSaturationTol) {
    ++tally.violations;
    ++violations;
  }
  max_violation = std::max(max_violation, -r.slack);
}

std::vector<InequalityReport> audit_state(const BeamState& s) {
  std::vector<InequalityReport> out;
  const int n = s.beam_count();
  if (n == 2) out.push_back(greenberger_yasin(s));
  out.push_back(duality_check(s));
  for (int m = 2; m <= n; ++m) out.push_back(trace_power_check(s, m));
  if (n == 3) out.push_back(three_beam_expanded(s));
  return out;
}

AuditSummary audit_random(int n, int trials, StateFamily family, Rng& rng) {
  if (trials < 1) throw Error(ErrorCode::OutOfRange, "trials must be positive");
  if (n < 2) throw Error(ErrorCode::WrongBeamCount, "needs at least two beams");
  AuditSummary summary;
  summary.n = n;
  summary.trials = trials;
  summary.min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    int rank = n;
    if (family == StateFamily::pure || (family == StateFamily::mixed && t % 2 == 0)) rank = 1;
    const auto s = BeamState::from_matrix(random_density(n, rank, rng));
    for (const auto& r : audit_state(s)) summary.record(r);
  }
  return summary;
}

}  // namespace multibeam
