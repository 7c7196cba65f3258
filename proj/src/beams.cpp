#include "multibeam/beams.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "multibeam/error.hpp"
#include "multibeam/simplex.hpp"

namespace multibeam {

BeamState BeamState::from_matrix(const CMatrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be square");
  }
  if (rho.rows() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "a beam state needs at least two beams");
  }
  const double defect = hermitian_defect(rho);
  if (!(defect <= kHermitianTol)) {
    throw Error(ErrorCode::NonHermitian, "max |rho - rho^dagger| = " + std::to_string(defect));
  }
  CMatrix h = (rho + rho.adjoint()) * 0.5;
  const double tr = h.trace().real();
  if (!(std::abs(tr - 1.0) <= kTraceTol)) {
    throw Error(ErrorCode::TraceNotOne, "trace = " + std::to_string(tr));
  }
  const double lowest = hermitian_eig(h).values(0);
  if (lowest < -kPositivityTol) {
    throw Error(ErrorCode::NotPositive, "most negative eigenvalue = " + std::to_string(lowest));
  }
  return BeamState(std::move(h));
}

BeamState BeamState::unchecked(CMatrix rho) { return BeamState(std::move(rho)); }

GramOverlaps GramOverlaps::from_matrix(const CMatrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw Error(ErrorCode::InvalidGram, "overlap matrix must be square and non-empty");
  }
  if (!is_hermitian(g)) throw Error(ErrorCode::InvalidGram, "overlap matrix is not Hermitian");
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (std::abs(g(i, i) - 1.0) > kHermitianTol) {
      throw Error(ErrorCode::InvalidGram, "overlap diagonal must be 1");
    }
  }
  CMatrix h = (g + g.adjoint()) * 0.5;
  if (hermitian_eig(h).values(0) < -kPositivityTol) {
    throw Error(ErrorCode::InvalidGram, "overlap matrix is not positive semidefinite");
  }
  return GramOverlaps(std::move(h));
}

GramOverlaps GramOverlaps::from_states(std::span<const CVector> chis) {
  const auto n = static_cast<Eigen::Index>(chis.size());
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = chis[j].dot(chis[i]);  // <chi_j|chi_i>
  return from_matrix(g);
}

namespace {

// n * I(phi) = u^dagger rho u with u_j = exp(-i phi_j); the diagonal of rho
// contributes the constant 1 and the off-diagonal part the fringe terms.
Complex scaled_intensity(const CMatrix& rho, std::span<const double> phases) {
  const auto n = rho.rows();
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex ui = std::polar(1.0, phases[i]);
    Complex row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) row += rho(i, j) * std::polar(1.0, -phases[j]);
    acc += ui * row;
  }
  return acc;
}

double intensity_unchecked(const CMatrix& rho, std::span<const double> phases) {
  return scaled_intensity(rho, phases).real() / static_cast<double>(rho.rows());
}

struct GridPoint {
  double value;
  std::vector<double> phases;
};

}  // namespace

double intensity(const BeamState& s, std::span<const double> phases) {
  const int n = s.beam_count();
  if (static_cast<int>(phases.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "phase vector length must equal beam count");
  }
  const Complex total = scaled_intensity(s.rho(), phases);
  if (std::abs(total.imag()) > 1e-12) {
    throw Error(ErrorCode::NonHermitian, "intensity acquired an imaginary part");
  }
  return total.real() / n;
}

int fringe_search_grid(int beam_count) {
  if (beam_count <= 3) return 64;
  if (beam_count == 4) return 24;
  return 12;
}

FringeContrast traditional_visibility(const BeamState& s) {
  const int n = s.beam_count();
  const int free_axes = n - 1;
  const int grid = fringe_search_grid(n);
  const double step = 2.0 * M_PI / grid;
  const CMatrix& rho = s.rho();

  // Phase of beam 0 is pinned; only differences matter.
  auto full_phases = [n](std::span<const double> free) {
    std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
    std::copy(free.begin(), free.end(), phi.begin() + 1);
    return phi;
  };
  auto eval = [&](std::span<const double> free) {
    const auto phi = full_phases(free);
    return intensity_unchecked(rho, phi);
  };

  constexpr std::size_t kCandidates = 3;
  std::vector<GridPoint> highs, lows;
  std::vector<int> index(static_cast<std::size_t>(free_axes), 0);
  std::vector<double> free(static_cast<std::size_t>(free_axes), 0.0);
  auto keep = [](std::vector<GridPoint>& pool, GridPoint p, auto better) {
    pool.push_back(std::move(p));
    std::sort(pool.begin(), pool.end(), better);
    if (pool.size() > kCandidates) pool.pop_back();
  };
  while (true) {
    for (int k = 0; k < free_axes; ++k) free[k] = step * index[k];
    const double v = eval(free);
    if (highs.size() < kCandidates || v > highs.back().value)
      keep(highs, {v, free}, [](const GridPoint& a, const GridPoint& b) { return a.value > b.value; });
    if (lows.size() < kCandidates || v < lows.back().value)
      keep(lows, {v, free}, [](const GridPoint& a, const GridPoint& b) { return a.value < b.value; });
    int axis = 0;
    while (axis < free_axes && ++index[axis] == grid) {
      index[axis] = 0;
      ++axis;
    }
    if (axis == free_axes) break;
  }

  SimplexOptions opts;
  opts.initial_step = 0.5 * step;
  opts.xtol = 1e-10;
  opts.max_iterations = 4000;

  GridPoint best_high{-1.0, {}}, best_low{2.0, {}};
  for (const auto& c : highs) {
    auto r = maximize_simplex(eval, c.phases, opts);
    if (r.value > best_high.value) best_high = {r.value, r.x};
  }
  for (const auto& c : lows) {
    auto r = minimize_simplex(eval, c.phases, opts);
    if (r.value < best_low.value) best_low = {r.value, r.x};
  }

  FringeContrast out;
  out.i_max = best_high.value;
  out.i_min = std::max(best_low.value, 0.0);
  out.argmax = full_phases(best_high.phases);
  out.argmin = full_phases(best_low.phases);
  const double denom = out.i_max + out.i_min;
  if (denom <= 1e-14) {
    out.degenerate = true;
    out.value = 0.0;
  } else {
    out.value = (out.i_max - out.i_min) / denom;
  }
  return out;
}

double generalized_visibility(const CMatrix& rho) {
  const auto n = rho.rows();
  double off = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) off += std::norm(rho(i, j));
  return std::sqrt(static_cast<double>(n) / static_cast<double>(n - 1) * off);
}

double generalized_visibility(const BeamState& s) { return generalized_visibility(s.rho()); }

double generalized_predictability(std::span<const double> populations) {
  const auto n = static_cast<double>(populations.size());
  // sum zeta^2 - 1/n written as a sum of squared deviations (sum zeta = 1).
  double mean = 0.0;
  for (double z : populations) mean += z;
  mean /= n;
  double dev = 0.0;
  for (double z : populations) dev += (z - mean) * (z - mean);
  return std::sqrt(n / (n - 1.0) * dev);
}

double generalized_predictability(const BeamState& s) {
  const RVector z = s.populations();
  return generalized_predictability(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
}

double betting_predictability(const BeamState& s) {
  const RVector z = s.populations();
  const auto n = static_cast<double>(z.size());
  Eigen::Index top = 0;
  for (Eigen::Index i = 1; i < z.size(); ++i)
    if (z(i) > z(top)) top = i;
  const double lose = z.sum() - z(top);
  return std::clamp(1.0 - n / (n - 1.0) * lose, 0.0, 1.0);
}

double phase_moment(const BeamState& s, int m, MomentMethod method) {
  if (m != 2 && m != 3) throw Error(ErrorCode::UnsupportedMoment, "only m = 2 and m = 3 are supported");
  const int n = s.beam_count();
  const CMatrix& rho = s.rho();

  if (method == MomentMethod::quadrature) {
    const double mean = 1.0 / n;
    return torus_average(
        [&](std::span<const double> phi) { return std::pow(intensity_unchecked(rho, phi) - mean, m); },
        n, 12);
  }

  // Directed pairs (i, j), i != j, each carrying phase exp(i(phi_i - phi_j)).
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) edges.emplace_back(i, j);

  std::vector<int> charge(static_cast<std::size_t>(n), 0);
  auto cancels = [&](std::initializer_list<std::pair<int, int>> tuple) {
    std::fill(charge.begin(), charge.end(), 0);
    for (auto [i, j] : tuple) {
      ++charge[i];
      --charge[j];
    }
    return std::all_of(charge.begin(), charge.end(), [](int c) { return c == 0; });
  };

  Complex sum = 0.0;
  for (const auto& a : edges) {
    for (const auto& b : edges) {
      if (m == 2) {
        if (cancels({a, b})) sum += rho(a.first, a.second) * rho(b.first, b.second);
        continue;
      }
      for (const auto& c : edges) {
        if (cancels({a, b, c}))
          sum += rho(a.first, a.second) * rho(b.first, b.second) * rho(c.first, c.second);
      }
    }
  }
  return sum.real() / std::pow(static_cast<double>(n), m);
}

double pairwise_visibility(const BeamState& s, int i, int j) {
  const int n = s.beam_count();
  if (i < 0 || j < 0 || i >= n || j >= n) throw Error(ErrorCode::IndexOutOfRange, "beam index out of range");
  if (i == j) throw Error(ErrorCode::SameIndex, "pairwise visibility needs two distinct beams");
  return 2.0 * std::abs(s.coherence(i, j));
}

BeamState environment_decohere(const BeamState& s, const GramOverlaps& g) {
  if (g.size() != s.beam_count()) {
    throw Error(ErrorCode::DimensionMismatch, "overlap matrix size must equal beam count");
  }
  return BeamState::from_matrix(s.rho().cwiseProduct(g.matrix()));
}

BeamState lambda_example(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "lambda must satisfy 0 <= lambda < 1");
  }
  CMatrix rho(3, 3);
  rho << 1.0, -lambda, lambda,
         -lambda, 1.0, -lambda,
         lambda, -lambda, 1.0;
  return BeamState::from_matrix(rho / 3.0);
}

}  // namespace multibeam
