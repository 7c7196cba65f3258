#pragma once

#include <functional>
#include <span>
#include <vector>

namespace multibeam {

struct SimplexOptions {
  double initial_step = 0.1;
  // Stop once every vertex lies within this distance of the best one.
  double xtol = 1e-9;
  int max_iterations = 2000;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead downhill simplex minimization.
SimplexResult minimize_simplex(const Objective& f, std::vector<double> x0,
                               const SimplexOptions& options = {});

/// Maximizes f by minimizing -f; the returned value is the maximum.
SimplexResult maximize_simplex(const Objective& f, std::vector<double> x0,
                               const SimplexOptions& options = {});

}  // namespace multibeam
