#pragma once

#include <span>
#include <vector>

#include "multibeam/numerics.hpp"

namespace multibeam {

// Tolerances for accepting a density matrix as a beam state.
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-12;

/// Validated n-beam density matrix: Hermitian, unit trace, positive
/// semidefinite, n >= 2. Diagonal entries are the beam populations, the
/// off-diagonal entries the coherences I_ij.
class BeamState {
 public:
  /// Validates and symmetrizes `rho`. Throws Error with code NonHermitian,
  /// TraceNotOne, NotPositive (message carries the most negative eigenvalue)
  /// or DimensionMismatch.
  static BeamState from_matrix(const CMatrix& rho);

  /// Wraps `rho` without validation. Only for self-tests of audit harnesses
  /// that must observe what happens on non-physical input.
  static BeamState unchecked(CMatrix rho);

  int beam_count() const noexcept { return static_cast<int>(rho_.rows()); }
  const CMatrix& rho() const noexcept { return rho_; }
  double population(int i) const { return rho_(i, i).real(); }
  Complex coherence(int i, int j) const { return rho_(i, j); }
  RVector populations() const { return rho_.diagonal().real(); }
  double purity() const { return trace_power(rho_, 2); }

 private:
  explicit BeamState(CMatrix rho) : rho_(std::move(rho)) {}
  CMatrix rho_;
};

/// Overlap matrix g_ij = <chi_j|chi_i> of environment states. Hermitian,
/// unit diagonal, positive semidefinite.
class GramOverlaps {
 public:
  /// Throws Error(InvalidGram).
  static GramOverlaps from_matrix(const CMatrix& g);
  static GramOverlaps from_states(std::span<const CVector> chis);

  const CMatrix& matrix() const noexcept { return g_; }
  int size() const noexcept { return static_cast<int>(g_.rows()); }

 private:
  explicit GramOverlaps(CMatrix g) : g_(std::move(g)) {}
  CMatrix g_;
};

/// Output-port detection probability I(phi) = (1/n)(1 + sum_{i!=j} e^{i(phi_i - phi_j)} I_ij).
double intensity(const BeamState& s, std::span<const double> phases);

struct FringeContrast {
  double value = 0.0;
  double i_max = 0.0;
  double i_min = 0.0;
  std::vector<double> argmax;  // phases with phases[0] == 0
  std::vector<double> argmin;
  bool degenerate = false;     // I_max + I_min <= 1e-14; value set to 0
};

/// Points per axis of the coarse torus search used by traditional_visibility.
int fringe_search_grid(int beam_count);

/// Traditional contrast (I_max - I_min)/(I_max + I_min) found by exhaustive
/// grid over the (n-1)-torus followed by simplex refinement of the extrema.
FringeContrast traditional_visibility(const BeamState& s);

/// sqrt(n/(n-1) sum_{i!=j} |I_ij|^2).
double generalized_visibility(const BeamState& s);
double generalized_visibility(const CMatrix& rho);

/// sqrt(n/(n-1) (sum_i zeta_i^2 - 1/n)).
double generalized_predictability(const BeamState& s);
double generalized_predictability(std::span<const double> populations);

/// 1 - n/(n-1) sum_{i != ibar} zeta_i, with ibar the most populated beam
/// (lowest index on ties).
double betting_predictability(const BeamState& s);

enum class MomentMethod { analytic, quadrature };

/// Central phase moment <(I - <I>)^m>_phi for m in {2, 3}.
///
/// The analytic route sums products I_e1 ... I_em over ordered tuples of
/// directed beam pairs whose phase factors cancel; the quadrature route
/// averages (I - 1/n)^m over the full n-torus.
double phase_moment(const BeamState& s, int m, MomentMethod method);

/// Ratio between the triple product (I12 I23 I31 + c.c.) and the normalized
/// third moment <(dI)^3>/<I>^3 for three beams. Each directed 3-cycle enters
/// the third moment through its 3! orderings, so the ratio is 1/6.
inline constexpr double kTripleProductPerMomentRatio = 1.0 / 6.0;

/// 2 |I_ij| (0-based indices).
double pairwise_visibility(const BeamState& s, int i, int j);

/// rho'_ij = rho_ij g_ij.
BeamState environment_decohere(const BeamState& s, const GramOverlaps& g);

/// (1/3) [[1,-l,l],[-l,1,-l],[l,-l,1]] for 0 <= l < 1.
BeamState lambda_example(double lambda);

}  // namespace multibeam
