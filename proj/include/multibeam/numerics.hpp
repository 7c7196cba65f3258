#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>

#include <Eigen/Dense>

namespace multibeam {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

// Max-entry tolerance on |m - m^dagger| accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-12;

/// Largest entry of |m - m^dagger|. Non-square input yields +inf.
double hermitian_defect(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);

/// (m + m^dagger) / 2, after checking the defect is within kHermitianTol.
/// Throws Error(NonHermitian) otherwise.
CMatrix symmetrized(const CMatrix& m);

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns, vectors.col(k) pairs with values(k)
};

/// Spectral decomposition of a Hermitian matrix.
///
/// The input is symmetrized before solving. Throws Error(NonHermitian) when the
/// Hermitian defect exceeds kHermitianTol and Error(ConvergenceFailure) if the
/// eigensolver does not converge.
EigenDecomposition hermitian_eig(const CMatrix& m);

/// Re Tr(rho^m) by repeated multiplication.
double trace_power(const CMatrix& rho, int m);

/// Seeded pseudo-random source (64-bit Mersenne Twister).
///
/// Deterministic within a build for a fixed seed. Not thread-safe; give each
/// concurrent task its own instance via derive().
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return normal_(engine_); }
  // Standard complex Gaussian: E|z|^2 = 1.
  Complex complex_normal();
  std::uint64_t next_u64() { return engine_(); }

  // Independent child stream keyed by `stream`.
  Rng derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// G G^dagger / Tr(G G^dagger) with G an n x rank complex Gaussian matrix.
CMatrix random_density(int n, int rank, Rng& rng);

/// Unit vector drawn uniformly from the sphere in C^d.
CVector random_unit_vector(int d, Rng& rng);

/// Random Hermitian matrix with Gaussian entries.
CMatrix random_hermitian(int n, Rng& rng);

using PhaseFunction = std::function<double(std::span<const double>)>;

/// Average of f over the n-torus [0, 2pi)^n on a uniform product grid with
/// `grid` points per axis. Exact for trigonometric polynomials whose degree
/// in each phase is below `grid`.
double torus_average(const PhaseFunction& f, int n, int grid);

}  // namespace multibeam
