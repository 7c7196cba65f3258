// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "multibeam/beams.hpp"
#include "multibeam/detector.hpp"
#include "multibeam/inequalities.hpp"
#include "multibeam/optimizer.hpp"
#include "oracles.hpp"

using namespace multibeam;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      else detail.str("");
      pass = false;
      detail << what;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<void(Verdict&)> body;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(a + (b - a) * k / (n - 1));
  return v;
}

// n interior points of (a, b).
std::vector<double> interior(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 1; k <= n; ++k) v.push_back(a + (b - a) * k / (n + 1));
  return v;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double pvm_distinguishability(double theta) {
  return optimal_two_element_pvm(symmetric_example(theta), Measure::knowledge).value;
}

void visibility_curve(Verdict& v) {
  double worst = 0.0;
  for (double t : linspace(0.0, M_PI, 200)) {
    const double c = std::cos(t);
    worst = std::max(worst, std::abs(generalized_visibility(reduced_beam(symmetric_example(t))) -
                                     std::sqrt((1 + c + c * c) / 3)));
  }
  v.require(worst <= 1e-12, "max error " + fmt(worst));
  if (v.pass) v.detail << "max error " << fmt(worst);
}

void distinguishability_curve(Verdict& v) {
  Rng rng(2);
  SearchOptions opts;
  opts.max_elements = 4;
  opts.restarts = 32;
  double worst = 0.0;
  int k = 0;
  for (double t : linspace(0.0, M_PI, 50)) {
    Rng local = rng.derive(static_cast<std::uint64_t>(k++));
    const auto r = distinguishability_numeric(symmetric_example(t), Measure::knowledge, opts, local);
    worst = std::max(worst, std::abs(r.value - analytic_D(t)));
  }
  v.require(worst <= 1e-6, "max error " + fmt(worst));
  const double b = 2 * M_PI / 3;
  const double left = std::sin(b) / std::sqrt(3.0), right = 2.0 / 3.0 * std::pow(std::sin(b / 2), 2);
  v.require(std::abs(left - 0.5) <= 1e-12 && std::abs(right - 0.5) <= 1e-12, "branches disagree at 2pi/3");
  Rng local = rng.derive(1000);
  const double at = distinguishability_numeric(symmetric_example(b), Measure::knowledge, opts, local).value;
  v.require(std::abs(at - 0.5) <= 1e-6, "numeric value at 2pi/3 " + fmt(at));
  if (v.pass) v.detail << "max error " << fmt(worst);
}

void measurement_axes(Verdict& v) {
  double worst = 1.0;
  auto probe = [&](double t, int axis) {
    const auto r = optimal_two_element_pvm(symmetric_example(t), Measure::knowledge);
    const double dot = std::abs((*r.best_povm.bloch())[0].vector(axis));
    worst = std::min(worst, dot);
    v.require(dot >= 1 - 1e-6, "axis mismatch at theta " + fmt(t));
  };
  for (double t : interior(0.1, 2 * M_PI / 3 - 0.1, 25)) probe(t, 0);
  for (double t : interior(2 * M_PI / 3 + 0.1, M_PI - 1e-3, 25)) probe(t, 2);
  if (v.pass) v.detail << "min |m.axis| " << fmt(worst);
}

double decohered_contrast(double lambda) {
  CMatrix g = CMatrix::Identity(3, 3);
  g(0, 1) = g(1, 0) = 1.0;
  return traditional_visibility(environment_decohere(lambda_example(lambda), GramOverlaps::from_matrix(g))).value;
}

void lambda_decoherence(Verdict& v) {
  const double before = traditional_visibility(lambda_example(0.5)).value;
  const double after = decohered_contrast(0.5);
  v.require(std::abs(before - 0.6) <= 1e-9, "contrast " + fmt(before));
  v.require(std::abs(after - 2.0 / 3.0) <= 1e-9, "decohered contrast " + std::to_string(after) + ", expected 2/3");
  for (double l : {0.3, 0.5, 0.9}) {
    const double b = traditional_visibility(lambda_example(l)).value, a = decohered_contrast(l);
    v.require(a > b, "no increase at lambda " + fmt(l) + " (" + fmt(a) + " vs " + fmt(b) + ")");
  }
  const double b = traditional_visibility(lambda_example(0.1)).value, a = decohered_contrast(0.1);
  v.require(a < b, "no decrease at lambda 0.1");
}

void purity_saturation(Verdict& v) {
  Rng rng(5);
  double worst_pure = 0.0, worst_mixed = 0.0;
  for (int n = 2; n <= 4; ++n) {
    for (int t = 0; t < 1000; ++t) {
      const auto pure = BeamState::from_matrix(random_density(n, 1, rng));
      const double vp = generalized_visibility(pure), pp = generalized_predictability(pure);
      worst_pure = std::max(worst_pure, std::abs(vp * vp + pp * pp - 1));
      const auto mixed = BeamState::from_matrix(random_density(n, n, rng));
      const double vm = generalized_visibility(mixed), pm = generalized_predictability(mixed);
      worst_mixed = std::max(worst_mixed, vm * vm + pm * pm);
    }
  }
  v.require(worst_pure <= 1e-10, "pure deviation " + fmt(worst_pure));
  v.require(worst_mixed < 1 - 1e-8, "mixed sum " + fmt(worst_mixed));
  if (v.pass) v.detail << "pure deviation " << fmt(worst_pure) << ", mixed max " << fmt(worst_mixed);
}

void trace_powers(Verdict& v) {
  Rng rng(6);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto s = BeamState::from_matrix(random_density(3, 1 + t % 3, rng));
    worst = std::max(worst, std::abs(three_beam_expanded(s).term("matrix_sum") - oracle::eigen_trace_power(s.rho(), 3)));
  }
  v.require(worst <= 1e-12, "expanded sum error " + fmt(worst));
  for (int n = 2; n <= 4; ++n)
    for (int t = 0; t < 1000; ++t) {
      const CMatrix rho = random_density(n, 1 + t % n, rng);
      for (int m = 2; m <= n; ++m) {
        const double tr = trace_power(rho, m);
        v.require(tr > 0 && tr <= 1 + 1e-12, "Tr rho^" + std::to_string(m) + " = " + fmt(tr));
      }
    }
  if (v.pass) v.detail << "expanded sum error " << fmt(worst);
}

void chain_inequalities(Verdict& v) {
  Rng rng(7);
  double worst = 1e300;
  for (int t = 0; t < 500; ++t) {
    const auto j = oracle::random_joint(3, 1 + t % 3, 2, rng);
    const auto reports = chain_check(j, qubit_pvm(oracle::random_direction(rng)));
    for (std::size_t k = 0; k < 4; ++k) worst = std::min(worst, reports[k].slack);
  }
  v.require(worst >= -1e-12, "min slack " + fmt(worst));
  if (v.pass) v.detail << "min slack " << fmt(worst);
}

void pure_joint_saturation(Verdict& v) {
  Rng rng(8);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto j = oracle::random_joint(3, 1, 2, rng);
    const auto a = measurement_report(j, qubit_pvm(oracle::random_direction(rng))).aggregates;
    worst = std::max(worst, std::abs(a.knowledge_quadrature * a.knowledge_quadrature +
                                     a.visibility_quadrature * a.visibility_quadrature - 1));
  }
  v.require(worst <= 1e-10, "max deviation " + fmt(worst));
  if (v.pass) v.detail << "max deviation " << fmt(worst);
}

void non_saturation(Verdict& v) {
  double worst = 1.0, where = 0.0;
  for (double t : linspace(0.2, M_PI, 200)) {
    const double d = analytic_D(t), vis = analytic_V(t);
    const double gap = 1 - d * d - vis * vis;
    if (gap < worst) {
      worst = gap;
      where = t;
    }
  }
  v.require(worst >= 0.01, "min gap " + fmt(worst) + " at theta " + fmt(where));
  Rng rng(9);
  const double at_pi = saturation_probe(symmetric_example(M_PI), SearchOptions{}, rng).gap;
  v.require(std::abs(at_pi - 2.0 / 9.0) <= 1e-6, "gap at pi " + fmt(at_pi));
  if (v.pass) v.detail << "min gap " << fmt(worst) << ", gap at pi " << fmt(at_pi);
}

void complementarity_exhibit(Verdict& v) {
  auto monotone = [&](double a, double b, int sign, const char* label) {
    double prev_d = 0, prev_v = 0;
    bool first = true;
    for (double t : interior(a, b, 20)) {
      const double d = pvm_distinguishability(t);
      const double vis = generalized_visibility(reduced_beam(symmetric_example(t)));
      if (!first) {
        v.require(sign * (d - prev_d) > 0, std::string("D not monotone on ") + label);
        v.require(sign * (vis - prev_v) > 0, std::string("V not monotone on ") + label);
      }
      first = false;
      prev_d = d;
      prev_v = vis;
    }
  };
  monotone(2 * M_PI / 3, M_PI, +1, "(2pi/3, pi)");
  monotone(M_PI / 2, 2 * M_PI / 3, -1, "(pi/2, 2pi/3)");
  if (v.pass) v.detail << "both rise on (2pi/3, pi) and fall on (pi/2, 2pi/3)";
}

void random_povm_oracle(Verdict& v) {
  Rng rng(11);
  double worst = -1e300;
  for (double t : {M_PI / 3, 2 * M_PI / 3, 5 * M_PI / 6}) {
    const auto j = symmetric_example(t);
    const double d = analytic_D(t);
    for (int s = 0; s < 100000; ++s) {
      const auto povm = random_qubit_povm(2 + s % 5, rng);
      worst = std::max(worst, evaluate_aggregates(j, povm.elements()).knowledge - d);
    }
  }
  v.require(worst <= 1e-9, "max excess " + fmt(worst));
  if (v.pass) v.detail << "max excess over D " << fmt(worst);
}

void quadrature_matches(Verdict& v) {
  Rng rng(12);
  double worst = 0.0;
  int k = 0;
  for (double t : {M_PI / 6, M_PI / 3, M_PI / 2}) {
    Rng local = rng.derive(static_cast<std::uint64_t>(k++));
    const auto r = distinguishability_numeric(symmetric_example(t), Measure::knowledge_quadrature, SearchOptions{}, local);
    worst = std::max(worst, std::abs(r.value - analytic_D(t)));
  }
  v.require(worst <= 1e-5, "max error " + fmt(worst));
  if (v.pass) v.detail << "max error " << fmt(worst);
}

void density_concavity(Verdict& v) {
  double worst = -1e300;
  for (double t : {0.1, M_PI / 3, 2 * M_PI / 3 - 0.05}) {
    const auto xs = linspace(-1.0, 1.0, 201);
    for (std::size_t k = 1; k + 1 < xs.size(); ++k)
      worst = std::max(worst, pair_knowledge_density(xs[k - 1], t) - 2 * pair_knowledge_density(xs[k], t) +
                                  pair_knowledge_density(xs[k + 1], t));
  }
  v.require(worst <= 1e-9, "max second difference " + fmt(worst));

  Rng rng(13);
  const auto j = symmetric_example(M_PI / 3);
  double slack = 1e300;
  for (int s = 0; s < 100; ++s) {
    auto povm = symmetrize_povm(oracle::random_in_plane_povm(2 + s % 4, rng), MirrorPlane::yz);
    double prev = measurement_report(j, povm).aggregates.knowledge_quadrature;
    while (povm.size() > 2) {
      povm = reduce_symmetric_povm(povm);
      const double next = measurement_report(j, povm).aggregates.knowledge_quadrature;
      slack = std::min(slack, next - prev);
      prev = next;
    }
  }
  v.require(slack >= -1e-12, "reduction slack " + fmt(slack));
  if (v.pass) v.detail << "max second difference " << fmt(worst) << ", reduction slack " << fmt(slack);
}

void third_moment(Verdict& v) {
  Rng rng(14);
  double moment_err = 0.0, ratio_err = 0.0, form_err = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto s = BeamState::from_matrix(random_density(3, 1 + t % 3, rng));
    const double analytic = phase_moment(s, 3, MomentMethod::analytic);
    moment_err = std::max(moment_err, std::abs(analytic - phase_moment(s, 3, MomentMethod::quadrature)));
    const CMatrix& r = s.rho();
    const double cycle = 2 * (r(0, 1) * r(1, 2) * r(2, 0)).real();
    const double mean = 1.0 / 3.0;
    ratio_err = std::max(ratio_err, std::abs(cycle - kTripleProductPerMomentRatio * analytic / (mean * mean * mean)));
    const auto rep = three_beam_expanded(s);
    form_err = std::max(form_err, std::abs(rep.term("measurable_sum") - rep.term("matrix_sum")));
  }
  v.require(moment_err <= 1e-10, "moment error " + fmt(moment_err));
  v.require(ratio_err <= 1e-10, "triple-product constant off by " + fmt(ratio_err));
  v.require(form_err <= 1e-9, "measurable form error " + fmt(form_err));
  if (v.pass)
    v.detail << "moment error " << fmt(moment_err) << ", constant " << fmt(kTripleProductPerMomentRatio)
             << ", form error " << fmt(form_err);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "visibility curve", 1.0, visibility_curve},
      {2, "distinguishability curve", 60.0, distinguishability_curve},
      {3, "optimal measurement axes", 0.0, measurement_axes},
      {4, "selective decoherence raises contrast", 0.0, lambda_decoherence},
      {5, "purity saturation", 0.0, purity_saturation},
      {6, "trace powers", 0.0, trace_powers},
      {7, "chain inequalities", 0.0, chain_inequalities},
      {8, "pure joint quadrature saturation", 0.0, pure_joint_saturation},
      {9, "duality gap stays open", 0.0, non_saturation},
      {10, "D and V move together", 0.0, complementarity_exhibit},
      {11, "random POVMs never beat D", 120.0, random_povm_oracle},
      {12, "quadrature optimum equals D", 0.0, quadrature_matches},
      {13, "density concavity and pair reduction", 0.0, density_concavity},
      {14, "third moment identity", 0.0, third_moment},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0) v.require(secs < c.time_limit, "took " + fmt(secs) + " s");
    if (!v.pass) ++failures;
    std::printf("criterion %2d %s: %s (%s) [%.2f s]\n", c.id, c.title.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
