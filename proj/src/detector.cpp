#include "multibeam/detector.hpp"

#include <cmath>
#include <string>

#include "multibeam/error.hpp"

namespace multibeam {

const CMatrix& pauli(int axis) {
  static const CMatrix sx = (CMatrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
  static const CMatrix sy =
      (CMatrix(2, 2) << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0).finished();
  static const CMatrix sz = (CMatrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
  switch (axis) {
    case 0: return sx;
    case 1: return sy;
    case 2: return sz;
    default: throw Error(ErrorCode::IndexOutOfRange, "Pauli axis must be 0, 1 or 2");
  }
}

CMatrix bloch_operator(double scale, const Vec3& v) {
  CMatrix a(2, 2);
  a(0, 0) = scale * (1.0 + v.z());
  a(1, 1) = scale * (1.0 - v.z());
  a(0, 1) = scale * Complex(v.x(), -v.y());
  a(1, 0) = scale * Complex(v.x(), v.y());
  return a;
}

BlochElement to_bloch(const CMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw Error(ErrorCode::WrongDimension, "Bloch form needs a 2x2 matrix");
  const double weight = 0.5 * (a(0, 0).real() + a(1, 1).real());
  BlochElement e;
  e.weight = weight;
  if (weight > 0.0) {
    e.vector = Vec3(0.5 * (a(1, 0) + a(0, 1)).real(), 0.5 * (a(1, 0) - a(0, 1)).imag(),
                    0.5 * (a(0, 0).real() - a(1, 1).real())) / weight;
  }
  return e;
}

CVector bloch_state(const Vec3& nhat) {
  if (std::abs(nhat.norm() - 1.0) > 1e-12) throw Error(ErrorCode::NotUnit, "Bloch direction must be a unit vector");
  CVector chi(2);
  if (nhat.z() >= 0.0) {
    const double c = std::sqrt(0.5 * (1.0 + nhat.z()));
    chi(0) = c;
    chi(1) = Complex(nhat.x(), nhat.y()) / (2.0 * c);
  } else {
    const double s = std::sqrt(0.5 * (1.0 - nhat.z()));
    chi(0) = Complex(nhat.x(), -nhat.y()) / (2.0 * s);
    chi(1) = s;
    // Rotate the global phase so the first nonzero component is real-positive.
    const double mag = std::abs(chi(0));
    if (mag > 1e-15) chi *= std::conj(chi(0)) / mag;
  }
  return chi;
}

Vec3 bloch_vector(const CVector& chi) {
  if (chi.size() != 2) throw Error(ErrorCode::WrongDimension, "Bloch vectors exist only for qubit states");
  const Complex off = std::conj(chi(0)) * chi(1);
  return {2.0 * off.real(), 2.0 * off.imag(), std::norm(chi(0)) - std::norm(chi(1))};
}

DetectorStates DetectorStates::from_vectors(std::vector<CVector> chis) {
  if (chis.empty()) throw Error(ErrorCode::DimensionMismatch, "no detector states");
  const auto d = chis.front().size();
  if (d < 2) throw Error(ErrorCode::DimensionMismatch, "detector dimension must be at least 2");
  for (const auto& c : chis) {
    if (c.size() != d) throw Error(ErrorCode::DimensionMismatch, "detector states differ in dimension");
    if (std::abs(c.norm() - 1.0) > 1e-12) throw Error(ErrorCode::NotUnit, "detector states must be normalized");
  }
  return DetectorStates(std::move(chis));
}

DetectorStates DetectorStates::from_bloch(std::span<const Vec3> directions) {
  std::vector<CVector> chis;
  chis.reserve(directions.size());
  for (const auto& n : directions) chis.push_back(bloch_state(n));
  return from_vectors(std::move(chis));
}

CMatrix DetectorStates::columns() const {
  CMatrix x(dimension(), count());
  for (int i = 0; i < count(); ++i) x.col(i) = chis_[static_cast<std::size_t>(i)];
  return x;
}

CMatrix DetectorStates::overlaps() const {
  const CMatrix x = columns();
  // (X^dagger X)_{ji} = <chi_j|chi_i>, so g = (X^dagger X)^T.
  return (x.adjoint() * x).transpose();
}

JointState::JointState(BeamState beam, DetectorStates detector)
    : beam_(std::move(beam)), detector_(std::move(detector)) {
  if (detector_.count() != beam_.beam_count()) {
    throw Error(ErrorCode::CountMismatch, "one detector state per beam is required");
  }
}

JointState entangle(BeamState beam, DetectorStates detector) {
  return JointState(std::move(beam), std::move(detector));
}

BeamState reduced_beam(const JointState& j) {
  return BeamState::from_matrix(j.beam().rho().cwiseProduct(j.detector().overlaps()));
}

CMatrix detector_marginal(const JointState& j) {
  const int d = j.detector_dimension();
  CMatrix rd = CMatrix::Zero(d, d);
  for (int i = 0; i < j.beam_count(); ++i) {
    const CVector& c = j.detector().state(i);
    rd += j.beam().population(i) * (c * c.adjoint());
  }
  return rd;
}

CMatrix densify(const JointState& j) {
  const int n = j.beam_count();
  const int d = j.detector_dimension();
  if (n * d > 64) throw Error(ErrorCode::TooLarge, "densified joint state limited to dimension 64");
  CMatrix out = CMatrix::Zero(n * d, n * d);
  const CMatrix& rho = j.beam().rho();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const CMatrix block = j.detector().state(i) * j.detector().state(k).adjoint();
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out(a * n + i, b * n + k) = rho(i, k) * block(a, b);
    }
  }
  return out;
}

Povm Povm::from_elements(std::vector<CMatrix> elements) {
  if (elements.empty()) throw Error(ErrorCode::InvalidPovm, "a POVM needs at least one element");
  const auto d = elements.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (auto& a : elements) {
    if (a.rows() != d || a.cols() != d) throw Error(ErrorCode::InvalidPovm, "elements differ in dimension");
    if (!is_hermitian(a)) throw Error(ErrorCode::InvalidPovm, "element is not Hermitian");
    a = (a + a.adjoint()) * 0.5;
    if (hermitian_eig(a).values(0) < -kHermitianTol) {
      throw Error(ErrorCode::InvalidPovm, "element is not positive semidefinite");
    }
    sum += a;
  }
  const double closure = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (closure > kPovmClosureTol) {
    throw Error(ErrorCode::InvalidPovm, "elements sum to identity only within " + std::to_string(closure));
  }
  std::optional<std::vector<BlochElement>> bloch;
  if (d == 2) {
    bloch.emplace();
    for (const auto& a : elements) bloch->push_back(to_bloch(a));
  }
  return Povm(std::move(elements), std::move(bloch));
}

Povm Povm::from_bloch(std::vector<BlochElement> elements) {
  std::vector<CMatrix> mats;
  mats.reserve(elements.size());
  for (const auto& e : elements) mats.push_back(e.matrix());
  Povm p = from_elements(std::move(mats));
  p.bloch_ = std::move(elements);
  return p;
}

bool Povm::rank_one() const {
  if (!bloch_) return false;
  for (const auto& e : *bloch_)
    if (e.weight > 0.0 && !e.rank_one()) return false;
  return true;
}

Povm pvm_from_observable(const CMatrix& w, double cluster_tol) {
  const auto eig = hermitian_eig(w);
  const auto d = eig.values.size();
  std::vector<CMatrix> projectors;
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index stop = start + 1;
    while (stop < d && eig.values(stop) - eig.values(start) <= cluster_tol) ++stop;
    const CMatrix v = eig.vectors.middleCols(start, stop - start);
    projectors.push_back(v * v.adjoint());
    start = stop;
  }
  return Povm::from_elements(std::move(projectors));
}

Povm qubit_pvm(const Vec3& direction) {
  const Vec3 m = direction.normalized();
  return Povm::from_bloch({{0.5, m}, {0.5, -m}});
}

namespace {

struct OutcomeStats {
  double probability = 0.0;
  double knowledge = 0.0;
  double visibility = 0.0;
};

// Fills `sub` with p_mu rho_(mu) and `lik` with P_i mu; returns p_mu.
double weighted_subensemble(const CMatrix& rho, const CMatrix& x, const CMatrix& a, CMatrix& sub,
                            std::vector<double>& lik) {
  const auto n = rho.rows();
  // m(j, i) = <chi_j|A|chi_i>
  const CMatrix m = x.adjoint() * a * x;
  sub.resize(n, n);
  lik.resize(static_cast<std::size_t>(n));
  double p = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    lik[static_cast<std::size_t>(i)] = m(i, i).real();
    for (Eigen::Index k = 0; k < n; ++k) sub(i, k) = m(k, i) * rho(i, k);
    p += rho(i, i).real() * m(i, i).real();
  }
  return p;
}

OutcomeStats stats_from_weighted(CMatrix& sub, double p) {
  OutcomeStats s;
  s.probability = p;
  if (p <= kNegligibleProbability) return s;
  sub /= p;
  const auto n = sub.rows();
  std::vector<double> q(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = sub(i, i).real();
  s.knowledge = generalized_predictability(q);
  s.visibility = generalized_visibility(sub);
  return s;
}

void accumulate(Aggregates& agg, const OutcomeStats& s) {
  agg.total_probability += s.probability;
  if (s.probability <= kNegligibleProbability) return;
  agg.knowledge += s.probability * s.knowledge;
  agg.knowledge_quadrature += s.probability * s.knowledge * s.knowledge;
  agg.visibility += s.probability * s.visibility;
  agg.visibility_quadrature += s.probability * s.visibility * s.visibility;
}

void finish(Aggregates& agg) {
  agg.knowledge_quadrature = std::sqrt(agg.knowledge_quadrature);
  agg.visibility_quadrature = std::sqrt(agg.visibility_quadrature);
}

}  // namespace

Aggregates evaluate_aggregates(const JointState& j, std::span<const CMatrix> elements) {
  const CMatrix x = j.detector().columns();
  const CMatrix& rho = j.beam().rho();
  Aggregates agg;
  CMatrix sub;
  std::vector<double> lik;
  for (const auto& a : elements) {
    const double p = weighted_subensemble(rho, x, a, sub, lik);
    accumulate(agg, stats_from_weighted(sub, p));
  }
  finish(agg);
  return agg;
}

MeasurementReport measurement_report(const JointState& j, const Povm& povm) {
  if (povm.dimension() != j.detector_dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "POVM dimension differs from detector dimension");
  }
  const CMatrix x = j.detector().columns();
  const CMatrix& rho = j.beam().rho();
  const int n = j.beam_count();

  MeasurementReport report;
  for (const auto& a : povm.elements()) {
    OutcomeRow row;
    CMatrix sub;
    const double p = weighted_subensemble(rho, x, a, sub, row.likelihoods);
    const OutcomeStats s = stats_from_weighted(sub, p);
    accumulate(report.aggregates, s);
    row.probability = p;
    row.skipped = p <= kNegligibleProbability;
    if (!row.skipped) {
      row.posteriors.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) row.posteriors[static_cast<std::size_t>(i)] = sub(i, i).real();
      row.knowledge = s.knowledge;
      row.visibility = s.visibility;
      row.subensemble = std::move(sub);
    }
    report.rows.push_back(std::move(row));
  }
  finish(report.aggregates);

  const BeamState reduced = reduced_beam(j);
  report.baseline_predictability = generalized_predictability(reduced);
  report.baseline_visibility = generalized_visibility(reduced);
  return report;
}

std::vector<InequalityReport> chain_check(const JointState& j, const Povm& povm) {
  const auto rep = measurement_report(j, povm);
  const auto& a = rep.aggregates;
  std::vector<InequalityReport> out;
  out.push_back(make_report("V <= V(W)", rep.baseline_visibility, a.visibility));
  out.push_back(make_report("V(W) <= V~(W)", a.visibility, a.visibility_quadrature));
  out.push_back(make_report("P <= K(W)", rep.baseline_predictability, a.knowledge));
  out.push_back(make_report("K(W) <= K~(W)", a.knowledge, a.knowledge_quadrature));
  auto quad = make_report("K~^2 + V~^2 <= 1",
                          a.knowledge_quadrature * a.knowledge_quadrature +
                              a.visibility_quadrature * a.visibility_quadrature,
                          1.0);
  quad.terms = {{"K~2", a.knowledge_quadrature * a.knowledge_quadrature},
                {"V~2", a.visibility_quadrature * a.visibility_quadrature}};
  out.push_back(std::move(quad));
  return out;
}

}  // namespace multibeam
