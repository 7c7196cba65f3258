#include "multibeam/numerics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "multibeam/error.hpp"

namespace multibeam {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SameIndex: return "SameIndex";
    case ErrorCode::UnsupportedMoment: return "UnsupportedMoment";
    case ErrorCode::InvalidGram: return "InvalidGram";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::WrongBeamCount: return "WrongBeamCount";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::InfeasibleStart: return "InfeasibleStart";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::NoRankOneForm: return "NoRankOneForm";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

double hermitian_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) { return hermitian_defect(m) <= tol; }

CMatrix symmetrized(const CMatrix& m) {
  const double defect = hermitian_defect(m);
  if (!(defect <= kHermitianTol)) {
    throw Error(ErrorCode::NonHermitian,
                "max |m - m^dagger| = " + std::to_string(defect));
  }
  return (m + m.adjoint()) * 0.5;
}

EigenDecomposition hermitian_eig(const CMatrix& m) {
  if (m.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
  const CMatrix h = symmetrized(m);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_power(const CMatrix& rho, int m) {
  if (m < 1) throw Error(ErrorCode::OutOfRange, "power must be positive");
  if (!is_hermitian(rho)) {
    throw Error(ErrorCode::NonHermitian, "trace_power needs a Hermitian matrix");
  }
  CMatrix acc = rho;
  for (int k = 1; k < m; ++k) acc = acc * rho;
  return acc.trace().real();
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng Rng::derive(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

CMatrix random_density(int n, int rank, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::OutOfRange, "dimension must be positive");
  if (rank < 1 || rank > n) throw Error(ErrorCode::OutOfRange, "rank must be in 1..n");
  CMatrix g(n, rank);
  for (int c = 0; c < rank; ++c)
    for (int r = 0; r < n; ++r) g(r, c) = rng.complex_normal();
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) * 0.5;
}

CVector random_unit_vector(int d, Rng& rng) {
  CVector v(d);
  for (int k = 0; k < d; ++k) v(k) = rng.complex_normal();
  return v / v.norm();
}

CMatrix random_hermitian(int n, Rng& rng) {
  CMatrix g(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) g(r, c) = rng.complex_normal();
  return (g + g.adjoint()) * 0.5;
}

double torus_average(const PhaseFunction& f, int n, int grid) {
  if (n < 1) throw Error(ErrorCode::OutOfRange, "torus dimension must be positive");
  if (grid < 8) throw Error(ErrorCode::OutOfRange, "torus grid needs at least 8 points per axis");
  const double step = 2.0 * M_PI / grid;
  std::vector<int> index(static_cast<std::size_t>(n), 0);
  std::vector<double> phases(static_cast<std::size_t>(n), 0.0);
  double sum = 0.0;
  std::size_t count = 0;
  while (true) {
    for (int k = 0; k < n; ++k) phases[k] = step * index[k];
    sum += f(phases);
    ++count;
    int axis = 0;
    while (axis < n && ++index[axis] == grid) {
      index[axis] = 0;
      ++axis;
    }
    if (axis == n) break;
  }
  return sum / static_cast<double>(count);
}

}  // namespace multibeam
