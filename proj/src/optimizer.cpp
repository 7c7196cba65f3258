#include "multibeam/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "multibeam/error.hpp"
#include "multibeam/simplex.hpp"

namespace multibeam {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::knowledge: return "K";
    case Measure::knowledge_quadrature: return "Ktilde";
    case Measure::visibility: return "V";
    case Measure::visibility_quadrature: return "Vtilde";
  }
  return "?";
}

double measure_value(const Aggregates& a, Measure m) {
  switch (m) {
    case Measure::knowledge: return a.knowledge;
    case Measure::knowledge_quadrature: return a.knowledge_quadrature;
    case Measure::visibility: return a.visibility;
    case Measure::visibility_quadrature: return a.visibility_quadrature;
  }
  return 0.0;
}

namespace {

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= M_PI)) throw Error(ErrorCode::OutOfRange, "theta must lie in [0, pi]");
}

void require_qubit(const JointState& j) {
  if (j.detector_dimension() != 2) throw Error(ErrorCode::WrongDimension, "search needs a qubit detector");
}

bool equal_populations(const JointState& j) {
  const RVector z = j.beam().populations();
  return (z.array() - 1.0 / static_cast<double>(z.size())).abs().maxCoeff() <= 1e-12;
}

std::vector<Vec3> fibonacci_sphere(int count) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts.emplace_back(r * std::cos(golden * k), r * std::sin(golden * k), z);
  }
  return pts;
}

// Angular chart centred on `center`: (a, b) = (0, 0) maps to center and the
// chart is regular in a neighbourhood of it.
struct DirectionChart {
  Vec3 center, e1, e2;

  explicit DirectionChart(const Vec3& c) : center(c.normalized()) {
    const Vec3 helper = std::abs(center.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    e1 = (helper - helper.dot(center) * center).normalized();
    e2 = center.cross(e1);
  }

  Vec3 operator()(double a, double b) const {
    return std::cos(b) * (std::cos(a) * center + std::sin(a) * e1) + std::sin(b) * e2;
  }
};

double evaluate_pvm(const JointState& j, Measure measure, const Vec3& m) {
  const Vec3 u = m.normalized();
  const CMatrix elems[2] = {bloch_operator(0.5, u), bloch_operator(0.5, -u)};
  return measure_value(evaluate_aggregates(j, elems), measure);
}

// Unconstrained parameters of a rank-one POVM with M elements. Element mu
// starts from the unnormalized vector v = e^{t/2} (cos a, e^{ib} sin a); the
// set is mapped onto a POVM by A_mu = S^{-1/2} v v^dagger S^{-1/2} with
// S = sum v v^dagger, so every parameter point is a valid measurement.
struct PovmLayout {
  int elements;

  static std::array<double, 3> seed(double log_weight, const Vec3& direction) {
    const Vec3 n = direction.normalized();
    return {log_weight, 0.5 * std::acos(std::clamp(n.z(), -1.0, 1.0)), std::atan2(n.y(), n.x())};
  }

  // Empty when S is numerically singular.
  std::vector<CMatrix> decode(std::span<const double> p) const {
    std::vector<CVector> vs;
    for (int mu = 0; mu < elements; ++mu) {
      const double r = std::exp(0.5 * p[3 * mu]);
      CVector v(2);
      v << r * std::cos(p[3 * mu + 1]), r * std::polar(1.0, p[3 * mu + 2]) * std::sin(p[3 * mu + 1]);
      vs.push_back(std::move(v));
    }
    // A second pass removes the rounding left by an ill-conditioned S.
    for (int pass = 0; pass < 2; ++pass) {
      CMatrix s = CMatrix::Zero(2, 2);
      for (const auto& v : vs) s += v * v.adjoint();
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(s);
      const RVector& lam = eig.eigenvalues();
      if (!(lam(0) > 1e-12 * lam(1))) return {};
      const CMatrix inv_sqrt = eig.eigenvectors() * lam.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                               eig.eigenvectors().adjoint();
      for (auto& v : vs) v = inv_sqrt * v;
    }
    std::vector<CMatrix> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(v * v.adjoint());
    return out;
  }
};

struct RestartOutcome {
  std::vector<CMatrix> elements;
  double value;
  bool converged;
};

OptimizationResult search_povm(const JointState& j, Measure measure, const SearchOptions& options,
                               Rng& rng) {
  require_qubit(j);
  if (options.max_elements < 2) throw Error(ErrorCode::OutOfRange, "max_elements must be at least 2");
  if (options.restarts < 1) throw Error(ErrorCode::OutOfRange, "restarts must be positive");

  const int m = options.max_elements;
  const auto lattice = fibonacci_sphere(std::max(8, options.restarts * m));
  const auto lattice_size = static_cast<int>(lattice.size());
  const PovmLayout layout{m};

  std::vector<double> history;
  std::optional<RestartOutcome> best;
  for (int r = 0; r < options.restarts; ++r) {
    Rng local = rng.derive(static_cast<std::uint64_t>(r));

    std::vector<double> x0;
    for (int mu = 0; mu < m; ++mu) {
      const int slot = (r * m + mu) * 7 % lattice_size;
      const Vec3 dir = lattice[static_cast<std::size_t>(slot)] +
                       0.05 * Vec3(local.normal(), local.normal(), local.normal());
      for (double v : PovmLayout::seed(std::log(local.uniform(0.5, 1.5)), dir)) x0.push_back(v);
    }

    auto objective = [&](std::span<const double> p) {
      const auto elems = layout.decode(p);
      if (elems.empty()) return -1.0;
      const double v = measure_value(evaluate_aggregates(j, elems), measure);
      return std::isfinite(v) ? v : -1.0;
    };

    SimplexOptions so;
    so.initial_step = 0.3;
    so.xtol = options.xtol;
    so.max_iterations = options.max_iterations;
    auto res = maximize_simplex(objective, x0, so);
    // Restart the simplex from its best vertex while budget remains.
    int used = res.iterations;
    for (int pass = 0; pass < 3 && used < options.max_iterations; ++pass) {
      so.initial_step = 0.05;
      so.max_iterations = options.max_iterations - used;
      auto again = maximize_simplex(objective, res.x, so);
      used += again.iterations;
      const bool improved = again.value > res.value + 1e-15;
      if (again.value >= res.value) res = std::move(again);
      if (!improved) break;
    }

    history.push_back(res.value);
    if (res.value < 0.0) continue;
    if (!best || res.value > best->value) {
      best = RestartOutcome{layout.decode(res.x), res.value, res.converged};
    }
  }

  if (!best) throw Error(ErrorCode::InfeasibleStart, "every restart stayed on a singular parametrization");

  std::vector<BlochElement> kept;
  for (const auto& a : best->elements) {
    BlochElement e = to_bloch(a);
    if (e.weight <= 1e-15) continue;
    e.vector.normalize();
    kept.push_back(e);
  }
  Povm povm = Povm::from_bloch(std::move(kept));
  const double value = measure_value(measurement_report(j, povm).aggregates, measure);

  OptimizationResult out{.best_povm = std::move(povm)};
  out.value = value;
  out.measure = measure;
  out.restarts_used = options.restarts;
  out.converged = best->converged;
  out.history = std::move(history);
  if (!equal_populations(j)) out.warnings.emplace_back("unequal beam populations");
  return out;
}

}  // namespace

JointState symmetric_example(double theta) {
  check_theta(theta);
  CMatrix rho = CMatrix::Constant(3, 3, Complex(1.0 / 3.0, 0.0));
  const Vec3 dirs[3] = {Vec3::UnitZ(), Vec3(std::sin(theta), 0.0, std::cos(theta)),
                        Vec3(-std::sin(theta), 0.0, std::cos(theta))};
  return entangle(BeamState::from_matrix(rho), DetectorStates::from_bloch(dirs));
}

double analytic_V(double theta) {
  check_theta(theta);
  const double c = std::cos(theta);
  return std::sqrt((1.0 + c + c * c) / 3.0);
}

double analytic_D(double theta) {
  check_theta(theta);
  if (theta <= 2.0 * M_PI / 3.0) return std::sin(theta) / std::sqrt(3.0);
  const double s = std::sin(0.5 * theta);
  return 2.0 / 3.0 * s * s;
}

double symmetric_pvm_knowledge_squared(double theta, double beta, double gamma) {
  const double sh = std::sin(0.5 * theta), ch = std::cos(0.5 * theta);
  const double cb = std::cos(beta), sb = std::sin(beta), cg = std::cos(gamma);
  return 4.0 / 9.0 * (cb * cb * sh * sh + 3.0 * sb * sb * cg * cg * ch * ch) * sh * sh;
}

double pair_knowledge_density(double x, double theta) {
  if (!(std::abs(x) <= 1.0)) throw Error(ErrorCode::DomainError, "|x| must not exceed 1");
  const double c = std::cos(theta), s = std::sin(theta);
  const double k = 1.0 + 2.0 * c;
  const double denom = 6.0 + 2.0 * x * k;
  if (!(denom > 0.0)) throw Error(ErrorCode::DomainError, "denominator 6 + 2x(1 + 2cos theta) must be positive");
  const double num = (1.0 + x) * (1.0 + x) + 2.0 * (1.0 + x * c) * (1.0 + x * c) + 2.0 * (1.0 - x * x) * s * s;
  return -(3.0 + x * k) / 6.0 + num / denom;
}

OptimizationResult optimal_two_element_pvm(const JointState& j, Measure measure, int grid) {
  require_qubit(j);
  if (grid < 1) throw Error(ErrorCode::OutOfRange, "grid must be positive");

  struct Candidate {
    double value;
    Vec3 dir;
  };
  std::vector<Candidate> scan;
  for (const auto& d : fibonacci_sphere(grid)) scan.push_back({evaluate_pvm(j, measure, d), d});
  std::sort(scan.begin(), scan.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  const std::size_t refine = std::min<std::size_t>(4, scan.size());

  SimplexOptions so;
  so.initial_step = 0.1;
  so.xtol = 1e-10;
  so.max_iterations = 2000;

  std::vector<double> history;
  Candidate best{-1.0, Vec3::UnitZ()};
  bool converged = false;
  for (std::size_t k = 0; k < refine; ++k) {
    const DirectionChart chart(scan[k].dir);
    auto f = [&](std::span<const double> p) { return evaluate_pvm(j, measure, chart(p[0], p[1])); };
    auto res = maximize_simplex(f, {0.0, 0.0}, so);
    history.push_back(res.value);
    if (res.value > best.value) {
      best = {res.value, chart(res.x[0], res.x[1]).normalized()};
      converged = res.converged;
    }
  }

  // Report m with a non-negative leading component for reproducibility.
  Vec3 m = best.dir;
  for (int axis : {0, 2, 1}) {
    if (std::abs(m(axis)) > 1e-12) {
      if (m(axis) < 0.0) m = -m;
      break;
    }
  }
  Povm povm = qubit_pvm(m);
  OptimizationResult out{.best_povm = povm};
  out.value = measure_value(measurement_report(j, povm).aggregates, measure);
  out.measure = measure;
  out.restarts_used = static_cast<int>(refine);
  out.converged = converged;
  out.history = std::move(history);
  if (!equal_populations(j)) out.warnings.emplace_back("unequal beam populations");
  return out;
}

OptimizationResult distinguishability_numeric(const JointState& j, Measure measure,
                                              const SearchOptions& options, Rng& rng) {
  if (measure != Measure::knowledge && measure != Measure::knowledge_quadrature) {
    throw Error(ErrorCode::OutOfRange, "distinguishability maximizes K or K~");
  }
  return search_povm(j, measure, options, rng);
}

OptimizationResult coherence_numeric(const JointState& j, Measure measure, const SearchOptions& options,
                                     Rng& rng) {
  if (measure != Measure::visibility && measure != Measure::visibility_quadrature) {
    throw Error(ErrorCode::OutOfRange, "coherence maximizes V(W) or V~(W)");
  }
  auto out = search_povm(j, measure, options, rng);
  out.supremum_estimate = true;
  return out;
}

Povm symmetrize_povm(const Povm& povm, MirrorPlane plane) {
  if (!povm.bloch() || !povm.rank_one()) {
    throw Error(ErrorCode::NoRankOneForm, "symmetrization needs a rank-one qubit POVM");
  }
  std::vector<BlochElement> out;
  for (const auto& e : *povm.bloch()) {
    BlochElement mirrored{0.5 * e.weight, e.vector};
    if (plane == MirrorPlane::xz) mirrored.vector.y() = -mirrored.vector.y();
    else mirrored.vector.x() = -mirrored.vector.x();
    out.push_back({0.5 * e.weight, e.vector});
    out.push_back(mirrored);
  }
  return Povm::from_bloch(std::move(out));
}

Povm reduce_symmetric_povm(const Povm& povm) {
  if (!povm.bloch()) throw Error(ErrorCode::NotSymmetric, "pair merging needs a qubit POVM");
  const auto& el = *povm.bloch();
  constexpr double tol = 1e-10;
  if (el.size() % 2 != 0) throw Error(ErrorCode::NotSymmetric, "odd number of elements");
  for (std::size_t k = 0; k < el.size(); k += 2) {
    const auto& a = el[k];
    const auto& b = el[k + 1];
    const bool paired = std::abs(a.weight - b.weight) <= tol && std::abs(a.vector.y()) <= tol &&
                        std::abs(b.vector.y()) <= tol && std::abs(a.vector.x() + b.vector.x()) <= tol &&
                        std::abs(a.vector.z() - b.vector.z()) <= tol && a.rank_one() && b.rank_one();
    if (!paired) throw Error(ErrorCode::NotSymmetric, "elements 2k, 2k+1 must be in-plane mirror images");
  }
  const std::size_t pairs = el.size() / 2;
  if (pairs < 2) throw Error(ErrorCode::TooFewPairs, "merging needs at least two pairs");

  const auto& last = el[2 * pairs - 2];
  const auto& prev = el[2 * pairs - 4];
  const double weight = last.weight + prev.weight;
  const double uz = std::clamp((last.weight * last.vector.z() + prev.weight * prev.vector.z()) / weight, -1.0, 1.0);
  const double ux = std::sqrt(std::max(0.0, 1.0 - uz * uz));

  std::vector<BlochElement> out(el.begin(), el.begin() + static_cast<std::ptrdiff_t>(2 * pairs - 4));
  out.push_back({weight, Vec3(ux, 0.0, uz)});
  out.push_back({weight, Vec3(-ux, 0.0, uz)});
  return Povm::from_bloch(std::move(out));
}

Povm random_qubit_povm(int elements, Rng& rng) {
  if (elements < 2) throw Error(ErrorCode::OutOfRange, "a random POVM needs at least two elements");
  std::vector<CMatrix> b;
  CMatrix s = CMatrix::Zero(2, 2);
  for (int mu = 0; mu < elements; ++mu) {
    const CVector v = random_unit_vector(2, rng) * std::sqrt(rng.uniform(0.05, 1.0));
    b.push_back(v * v.adjoint());
    s += b.back();
  }
  const auto eig = hermitian_eig(s);
  const CMatrix inv_sqrt =
      eig.vectors * eig.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  std::vector<BlochElement> out;
  for (const auto& bm : b) {
    const CMatrix a = inv_sqrt * bm * inv_sqrt;
    BlochElement e = to_bloch((a + a.adjoint()) * 0.5);
    e.vector.normalize();
    out.push_back(e);
  }
  return Povm::from_bloch(std::move(out));
}

SaturationProbe saturation_probe(const JointState& j, const SearchOptions& options, Rng& rng) {
  require_qubit(j);
  SaturationProbe p;
  p.distinguishability = distinguishability_numeric(j, Measure::knowledge, options, rng).value;
  p.visibility = generalized_visibility(reduced_beam(j));
  p.gap = 1.0 - p.distinguishability * p.distinguishability - p.visibility * p.visibility;
  return p;
}

std::vector<ScanRow> theta_scan(const ScanOptions& options, Rng& rng) {
  if (options.grid < 2) throw Error(ErrorCode::OutOfRange, "theta grid needs at least two points");
  std::vector<ScanRow> rows;
  for (int k = 0; k < options.grid; ++k) {
    const double theta = M_PI * k / (options.grid - 1);
    const JointState j = symmetric_example(theta);
    ScanRow row;
    row.theta = theta;
    row.visibility = generalized_visibility(reduced_beam(j));
    row.d_analytic = analytic_D(theta);
    row.duality_sum = row.d_analytic * row.d_analytic + row.visibility * row.visibility;
    if (options.optimize) {
      Rng local = rng.derive(static_cast<std::uint64_t>(k));
      row.d_numeric = optimal_two_element_pvm(j, Measure::knowledge, options.pvm_grid).value;
      if (options.cross_check) {
        row.d_search = distinguishability_numeric(j, Measure::knowledge, options.search, local).value;
      }
      if (options.include_tilde) {
        row.d_tilde_numeric =
            distinguishability_numeric(j, Measure::knowledge_quadrature, options.search, local).value;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace multibeam
