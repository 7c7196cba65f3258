#pragma once

// Reference computations that avoid the library code paths they check.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "multibeam/detector.hpp"
#include "multibeam/numerics.hpp"

namespace oracle {

using multibeam::CMatrix;
using multibeam::Complex;
using multibeam::CVector;

// Sum of eigenvalues^m from a general (non-Hermitian) eigensolver.
inline double eigen_trace_power(const CMatrix& rho, int m) {
  Eigen::ComplexEigenSolver<CMatrix> es(rho);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) s += std::pow(es.eigenvalues()(k), m).real();
  return s;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Uniform product rule over the n-torus with the first phase pinned.
inline double phase_average(const CMatrix& rho, int grid, int power) {
  const int n = static_cast<int>(rho.rows());
  std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
  double total = 0.0;
  long count = 0;
  while (true) {
    CVector u(n);
    u(0) = 1.0;
    for (int k = 1; k < n; ++k) u(k) = std::polar(1.0, -2.0 * M_PI * idx[static_cast<std::size_t>(k - 1)] / grid);
    const double intensity = (u.adjoint() * rho * u)(0, 0).real() / n;
    total += std::pow(intensity - 1.0 / n, power);
    ++count;
    int axis = 0;
    while (axis < n - 1 && ++idx[static_cast<std::size_t>(axis)] == grid) idx[static_cast<std::size_t>(axis++)] = 0;
    if (axis == n - 1) break;
  }
  return total / static_cast<double>(count);
}

// Unnormalized beam state conditioned on outcome A, from the dense joint
// matrix: Tr_D[(A (x) 1) rho_joint]. Row index of the dense matrix is a*n + i.
inline CMatrix dense_conditional(const CMatrix& joint, const CMatrix& a, int n) {
  const auto d = a.rows();
  CMatrix out = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (Eigen::Index x = 0; x < d; ++x)
        for (Eigen::Index y = 0; y < d; ++y) out(i, j) += a(x, y) * joint(y * n + i, x * n + j);
  return out;
}

inline CMatrix dense_detector_marginal(const CMatrix& joint, int n, int d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int i = 0; i < n; ++i) out(x, y) += joint(x * n + i, y * n + i);
  return out;
}

// Predictability and visibility of a normalized state written out directly.
inline double predictability(const CMatrix& rho) {
  const double n = static_cast<double>(rho.rows());
  double sq = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) sq += std::norm(rho(i, i));
  return std::sqrt(std::max(0.0, n / (n - 1.0) * (sq - 1.0 / n)));
}

inline double visibility(const CMatrix& rho) {
  const double n = static_cast<double>(rho.rows());
  double off = (rho.cwiseAbs2().sum()) - rho.diagonal().cwiseAbs2().sum();
  return std::sqrt(n / (n - 1.0) * off);
}

struct DenseAggregates {
  double k = 0, k2 = 0, v = 0, v2 = 0;
};

inline DenseAggregates dense_aggregates(const multibeam::JointState& j, const std::vector<CMatrix>& elements) {
  const CMatrix joint = multibeam::densify(j);
  DenseAggregates out;
  for (const auto& a : elements) {
    const CMatrix c = dense_conditional(joint, a, j.beam_count());
    const double p = c.trace().real();
    if (p <= 1e-14) continue;
    const CMatrix r = c / p;
    const double k = predictability(r), v = visibility(r);
    out.k += p * k;
    out.k2 += p * k * k;
    out.v += p * v;
    out.v2 += p * v * v;
  }
  out.k2 = std::sqrt(out.k2);
  out.v2 = std::sqrt(out.v2);
  return out;
}

inline multibeam::JointState random_joint(int n, int rank, int d, multibeam::Rng& rng) {
  std::vector<CVector> chis;
  for (int i = 0; i < n; ++i) chis.push_back(multibeam::random_unit_vector(d, rng));
  return multibeam::entangle(multibeam::BeamState::from_matrix(multibeam::random_density(n, rank, rng)),
                             multibeam::DetectorStates::from_vectors(std::move(chis)));
}

inline multibeam::Vec3 random_direction(multibeam::Rng& rng) {
  return multibeam::Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
}

// Random rank-one qubit POVM whose Bloch vectors all lie in the xz plane:
// real symmetric elements normalized by the real S^{-1/2}.
inline multibeam::Povm random_in_plane_povm(int elements, multibeam::Rng& rng) {
  std::vector<multibeam::BlochElement> raw;
  Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
  std::vector<Eigen::Vector2d> vs;
  for (int k = 0; k < elements; ++k) {
    const double a = rng.uniform(0.0, M_PI);
    Eigen::Vector2d v(std::cos(a), std::sin(a));
    v *= std::sqrt(rng.uniform(0.1, 1.0));
    s += v * v.transpose();
    vs.push_back(v);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s);
  const Eigen::Matrix2d inv_sqrt = es.operatorInverseSqrt();
  for (const auto& v : vs) {
    const Eigen::Vector2d u = inv_sqrt * v;
    const CMatrix a = (u * u.transpose()).cast<Complex>();
    auto e = multibeam::to_bloch(a);
    e.vector.y() = 0.0;
    e.vector.normalize();
    raw.push_back(e);
  }
  return multibeam::Povm::from_bloch(std::move(raw));
}

}  // namespace oracle
