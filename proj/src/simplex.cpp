#include "multibeam/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace multibeam {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

SimplexResult minimize_simplex(const Objective& f, std::vector<double> x0,
                               const SimplexOptions& options) {
  const std::size_t n = x0.size();
  SimplexResult result;
  if (n == 0) {
    result.x = x0;
    result.value = f(x0);
    result.converged = true;
    return result;
  }

  // Standard coefficients: reflection, expansion, contraction, shrink.
  constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;

  std::vector<std::vector<double>> vertex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) vertex[i + 1][i] += options.initial_step;
  std::vector<double> value(n + 1);
  for (std::size_t i = 0; i <= n; ++i) value[i] = f(vertex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  int iter = 0;
  bool converged = false;
  for (; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) diameter = std::max(diameter, distance(vertex[i], vertex[best]));
    if (diameter <= options.xtol) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += vertex[i][k];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + kAlpha * (centroid[k] - vertex[worst][k]);
    const double reflected = f(trial);

    if (reflected < value[best]) {
      for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + kGamma * (trial[k] - centroid[k]);
      const double expanded = f(trial2);
      if (expanded < reflected) {
        vertex[worst] = trial2;
        value[worst] = expanded;
      } else {
        vertex[worst] = trial;
        value[worst] = reflected;
      }
      continue;
    }
    if (reflected < value[second]) {
      vertex[worst] = trial;
      value[worst] = reflected;
      continue;
    }

    // Outside contraction when the reflection beat the worst point, inside otherwise.
    const bool outside = reflected < value[worst];
    const auto& toward = outside ? trial : vertex[worst];
    for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + kRho * (toward[k] - centroid[k]);
    const double contracted = f(trial2);
    if (contracted < (outside ? reflected : value[worst])) {
      vertex[worst] = trial2;
      value[worst] = contracted;
      continue;
    }

    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k)
        vertex[i][k] = vertex[best][k] + kSigma * (vertex[i][k] - vertex[best][k]);
      value[i] = f(vertex[i]);
    }
  }

  const auto best_it = std::min_element(value.begin(), value.end());
  const std::size_t best = static_cast<std::size_t>(best_it - value.begin());
  result.x = vertex[best];
  result.value = value[best];
  result.iterations = iter;
  result.converged = converged;
  return result;
}

SimplexResult maximize_simplex(const Objective& f, std::vector<double> x0,
                               const SimplexOptions& options) {
  SimplexResult r = minimize_simplex(
      [&f](std::span<const double> x) { return -f(x); }, std::move(x0), options);
  r.value = -r.value;
  return r;
}

}  // namespace multibeam
