#pragma once

#include <optional>
#include <span>
#include <vector>

#include "multibeam/beams.hpp"
#include "multibeam/inequalities.hpp"
#include "multibeam/numerics.hpp"

namespace multibeam {

// Outcomes with a-priori probability at or below this are dropped from reports.
inline constexpr double kNegligibleProbability = 1e-14;
inline constexpr double kPovmClosureTol = 1e-10;

/// Pauli matrices sigma_x, sigma_y, sigma_z.
const CMatrix& pauli(int axis);

/// (1 + v . sigma) / 2 scaled by `scale`: returns scale * (1 + v . sigma).
CMatrix bloch_operator(double scale, const Vec3& v);

/// Bloch vector and weight of a 2x2 Hermitian A = weight (1 + v . sigma).
struct BlochElement {
  double weight = 0.0;
  Vec3 vector = Vec3::Zero();  // unit for rank-one elements, |v| <= 1 otherwise

  CMatrix matrix() const { return bloch_operator(weight, vector); }
  bool rank_one(double tol = 1e-10) const { return std::abs(vector.norm() - 1.0) <= tol; }
};

BlochElement to_bloch(const CMatrix& a);

/// |chi> with |chi><chi| = (1 + n . sigma)/2; first nonzero component is
/// real-positive. Throws Error(NotUnit) unless |n| = 1 within 1e-12.
CVector bloch_state(const Vec3& nhat);

/// Bloch vector of a normalized qubit state.
Vec3 bloch_vector(const CVector& chi);

/// Unit detector states |chi_i>, one per beam, in a d-dimensional space.
class DetectorStates {
 public:
  /// Throws Error(NotUnit) when a vector is not normalized within 1e-12 and
  /// Error(DimensionMismatch) when dimensions differ or d < 2.
  static DetectorStates from_vectors(std::vector<CVector> chis);
  static DetectorStates from_bloch(std::span<const Vec3> directions);

  int dimension() const noexcept { return static_cast<int>(chis_.front().size()); }
  int count() const noexcept { return static_cast<int>(chis_.size()); }
  const CVector& state(int i) const { return chis_.at(static_cast<std::size_t>(i)); }
  const std::vector<CVector>& states() const noexcept { return chis_; }

  /// d x n matrix whose columns are the states.
  CMatrix columns() const;
  /// g_ij = <chi_j|chi_i>.
  CMatrix overlaps() const;

 private:
  explicit DetectorStates(std::vector<CVector> chis) : chis_(std::move(chis)) {}
  std::vector<CVector> chis_;
};

/// Beam and detector after the which-way interaction,
/// sum_ij rho_ij |chi_i><chi_j| (x) |psi_i><psi_j|, held structurally.
class JointState {
 public:
  JointState(BeamState beam, DetectorStates detector);

  const BeamState& beam() const noexcept { return beam_; }
  const DetectorStates& detector() const noexcept { return detector_; }
  int beam_count() const noexcept { return beam_.beam_count(); }
  int detector_dimension() const noexcept { return detector_.dimension(); }

 private:
  BeamState beam_;
  DetectorStates detector_;
};

/// Throws Error(CountMismatch) when the detector carries a different number of states.
JointState entangle(BeamState beam, DetectorStates detector);

/// rho'_ij = rho_ij <chi_j|chi_i>.
BeamState reduced_beam(const JointState& j);

/// rho_D = sum_i zeta_i |chi_i><chi_i|.
CMatrix detector_marginal(const JointState& j);

/// Explicit (n d) x (n d) joint density matrix, detector index major:
/// row = a * n + i for detector basis state a and beam i. Throws
/// Error(TooLarge) when n d > 64.
CMatrix densify(const JointState& j);

/// Positive operators summing to the identity on the detector space.
class Povm {
 public:
  /// Throws Error(InvalidPovm) if an element is not Hermitian PSD within
  /// 1e-12 or the sum differs from the identity by more than 1e-10.
  static Povm from_elements(std::vector<CMatrix> elements);
  /// Qubit POVM from weights and Bloch vectors, A = weight (1 + v . sigma).
  static Povm from_bloch(std::vector<BlochElement> elements);

  int dimension() const noexcept { return static_cast<int>(elements_.front().rows()); }
  int size() const noexcept { return static_cast<int>(elements_.size()); }
  const std::vector<CMatrix>& elements() const noexcept { return elements_; }
  const CMatrix& element(int mu) const { return elements_.at(static_cast<std::size_t>(mu)); }

  /// Bloch form; present whenever dimension() == 2.
  const std::optional<std::vector<BlochElement>>& bloch() const noexcept { return bloch_; }
  bool rank_one() const;

 private:
  Povm(std::vector<CMatrix> elements, std::optional<std::vector<BlochElement>> bloch)
      : elements_(std::move(elements)), bloch_(std::move(bloch)) {}
  std::vector<CMatrix> elements_;
  std::optional<std::vector<BlochElement>> bloch_;
};

/// Spectral projectors of a Hermitian observable; eigenvalues closer than
/// `cluster_tol` share a projector.
Povm pvm_from_observable(const CMatrix& w, double cluster_tol = 1e-9);

/// Two-outcome projective measurement (1 +- m . sigma)/2.
Povm qubit_pvm(const Vec3& direction);

struct OutcomeRow {
  double probability = 0.0;                // p_mu
  std::vector<double> likelihoods;         // P_i mu = <chi_i|A_mu|chi_i>
  std::vector<double> posteriors;          // Q_i mu = zeta_i P_i mu / p_mu
  double knowledge = 0.0;                  // K_mu
  double visibility = 0.0;                 // V_mu
  CMatrix subensemble;                     // rho_(mu); empty when skipped
  bool skipped = false;                    // p_mu <= 1e-14
};

struct Aggregates {
  double knowledge = 0.0;              // K(W)  = sum p K_mu
  double knowledge_quadrature = 0.0;   // K~(W) = sqrt(sum p K_mu^2)
  double visibility = 0.0;             // V(W)  = sum p V_mu
  double visibility_quadrature = 0.0;  // V~(W) = sqrt(sum p V_mu^2)
  double total_probability = 0.0;
};

struct MeasurementReport {
  std::vector<OutcomeRow> rows;
  Aggregates aggregates;
  double baseline_predictability = 0.0;  // P of the reduced beam
  double baseline_visibility = 0.0;      // V of the reduced beam
};

/// Outcome statistics, sorted subensembles and aggregate which-way measures.
/// Throws Error(DimensionMismatch) when the POVM acts on another space.
MeasurementReport measurement_report(const JointState& j, const Povm& povm);

/// Aggregates only, for arbitrary positive elements (no closure check).
Aggregates evaluate_aggregates(const JointState& j, std::span<const CMatrix> elements);

/// V <= V(W) <= V~(W), P <= K(W) <= K~(W) and K~^2 + V~^2 <= 1.
std::vector<InequalityReport> chain_check(const JointState& j, const Povm& povm);

}  // namespace multibeam
