#pragma once

#include <optional>
#include <string>
#include <vector>

#include "multibeam/detector.hpp"

namespace multibeam {

/// Aggregate figure of merit maximized over measurements.
enum class Measure {
  knowledge,              // K(W)
  knowledge_quadrature,   // K~(W)
  visibility,             // V(W)
  visibility_quadrature,  // V~(W)
};

std::string_view to_string(Measure m);
double measure_value(const Aggregates& a, Measure m);

struct SearchOptions {
  int max_elements = 4;
  int restarts = 32;
  int max_iterations = 2000;  // per restart
  double xtol = 1e-9;         // simplex diameter
};

struct OptimizationResult {
  Povm best_povm;
  double value = 0.0;
  Measure measure = Measure::knowledge;
  int restarts_used = 0;
  bool converged = false;
  std::vector<double> history{};  // best value per restart
  bool supremum_estimate = false;
  std::vector<std::string> warnings{};
};

// --- Symmetric three-beam family -------------------------------------------
//
// Equal populations, all coherences 1/3 (a pure state), and qubit detector
// states with coplanar Bloch vectors n0 = z, n+- = (+-sin t, 0, cos t).

/// Throws Error(OutOfRange) unless 0 <= theta <= pi.
JointState symmetric_example(double theta);

/// sqrt((1 + cos t + cos^2 t)/3).
double analytic_V(double theta);

/// sin(t)/sqrt(3) for t <= 2pi/3, (2/3) sin^2(t/2) beyond.
double analytic_D(double theta);

/// K^2 delivered by the projective measurement along the direction with
/// polar angle `beta` and azimuth `gamma`, for the symmetric family.
double symmetric_pvm_knowledge_squared(double theta, double beta, double gamma);

/// Contribution to K~^2 per unit weight of each element of an in-plane
/// pair (w, (+-sqrt(1-x^2), 0, x)) in the symmetric family. Concave in x for
/// theta < 2pi/3. Throws Error(DomainError) for |x| > 1 or a non-positive
/// denominator.
double pair_knowledge_density(double x, double theta);

// --- Measurement search ------------------------------------------------------

/// Best projective measurement (1 +- m . sigma)/2: Fibonacci-lattice scan of
/// `grid` directions, then simplex refinement of the leading candidates.
/// Throws Error(WrongDimension) for d != 2.
OptimizationResult optimal_two_element_pvm(const JointState& j, Measure measure, int grid = 200);

/// D = max_W K(W) (or D~ with K~) over POVMs with up to `max_elements`
/// rank-one elements; the last element is solved from closure and may be
/// any positive operator. Throws Error(WrongDimension) or
/// Error(InfeasibleStart).
OptimizationResult distinguishability_numeric(const JointState& j, Measure measure,
                                              const SearchOptions& options, Rng& rng);

/// C = sup_W V(W) (or C~ with V~), same search as distinguishability_numeric.
/// The result is flagged as a supremum estimate.
OptimizationResult coherence_numeric(const JointState& j, Measure measure,
                                     const SearchOptions& options, Rng& rng);

// --- POVM transformations ----------------------------------------------------

enum class MirrorPlane {
  xz,  // y -> -y
  yz,  // x -> -x; for in-plane vectors the mirror across the z axis
};

/// Splits every element into two half-weight elements, the second mirrored
/// through `plane`; element 2k and 2k+1 form a pair. Throws
/// Error(NoRankOneForm) unless the POVM is a qubit rank-one POVM.
Povm symmetrize_povm(const Povm& povm, MirrorPlane plane);

/// Replaces the last two mirror pairs (x -> -x, in the xz plane) of a paired
/// POVM by one pair with the combined weight and the weight-averaged
/// z-component. Throws Error(NotSymmetric) or Error(TooFewPairs).
Povm reduce_symmetric_povm(const Povm& povm);

/// Random rank-one qubit POVM with `elements` outcomes: S^{-1/2} B_mu S^{-1/2}
/// for random rank-one B_mu with S = sum B_mu.
Povm random_qubit_povm(int elements, Rng& rng);

// --- Probes ------------------------------------------------------------------

struct SaturationProbe {
  double gap = 0.0;  // 1 - D^2 - V^2
  double distinguishability = 0.0;
  double visibility = 0.0;
};

SaturationProbe saturation_probe(const JointState& j, const SearchOptions& options, Rng& rng);

struct ScanRow {
  double theta = 0.0;
  double visibility = 0.0;
  double d_analytic = 0.0;
  std::optional<double> d_numeric;        // two-element PVM search
  std::optional<double> d_search;         // general POVM search, cross-check
  std::optional<double> d_tilde_numeric;  // K~ search
  double duality_sum = 0.0;               // D_analytic^2 + V^2
};

struct ScanOptions {
  int grid = 200;
  bool optimize = true;
  bool include_tilde = false;
  bool cross_check = false;  // also run the general POVM search for D
  int pvm_grid = 200;
  SearchOptions search;
};

/// Rows on a uniform theta grid over [0, pi], endpoints included.
std::vector<ScanRow> theta_scan(const ScanOptions& options, Rng& rng);

}  // namespace multibeam
