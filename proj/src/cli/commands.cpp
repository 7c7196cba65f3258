#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "multibeam/cli.hpp"
#include "multibeam/error.hpp"
#include "multibeam/inequalities.hpp"

namespace multibeam::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

enum class Format { csv, json };

struct Globals {
  std::uint64_t seed = 1;
  Format format = Format::csv;
  std::string out_path;
};

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

// JSON numbers keep full precision; CSV uses 12 significant digits.
void emit_json(std::ostream& os, const ordered_json& doc) { os << doc.dump(2) << '\n'; }

// --- figure -------------------------------------------------------------------

struct FigureArgs {
  int grid = 200;
  bool no_optimize = false;
  bool tilde = false;
  bool cross_check = false;
  int restarts = 32;
  int max_elements = 4;
};

int cmd_figure(const Globals& g, const FigureArgs& a, std::ostream& os) {
  ScanOptions opts;
  opts.grid = a.grid;
  opts.optimize = !a.no_optimize;
  opts.include_tilde = a.tilde && opts.optimize;
  opts.cross_check = a.cross_check && opts.optimize;
  opts.search.restarts = a.restarts;
  opts.search.max_elements = a.max_elements;
  Rng rng(g.seed);
  const auto rows = theta_scan(opts, rng);

  if (g.format == Format::json) {
    ordered_json doc = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["theta"] = r.theta;
      row["V"] = r.visibility;
      row["D_analytic"] = r.d_analytic;
      row["D_numeric"] = number_or_null(r.d_numeric);
      row["duality_sum"] = r.duality_sum;
      if (a.tilde) row["D_tilde"] = number_or_null(r.d_tilde_numeric);
      if (a.cross_check) row["D_search"] = number_or_null(r.d_search);
      doc.push_back(std::move(row));
    }
    emit_json(os, doc);
    return kExitOk;
  }
  os << "theta,V,D_analytic,D_numeric,duality_sum";
  if (a.tilde) os << ",D_tilde";
  if (a.cross_check) os << ",D_search";
  os << '\n';
  for (const auto& r : rows) {
    os << format_number(r.theta) << ',' << format_number(r.visibility) << ',' << format_number(r.d_analytic) << ','
       << csv_field(r.d_numeric) << ',' << format_number(r.duality_sum);
    if (a.tilde) os << ',' << csv_field(r.d_tilde_numeric);
    if (a.cross_check) os << ',' << csv_field(r.d_search);
    os << '\n';
  }
  return kExitOk;
}

// --- lambda-example -------------------------------------------------------------

// Keeps the coherence between the first two beams and removes every
// coherence involving the third.
GramOverlaps third_beam_marker() {
  CMatrix g = CMatrix::Identity(3, 3);
  g(0, 1) = g(1, 0) = 1.0;
  return GramOverlaps::from_matrix(g);
}

int cmd_lambda(const Globals& g, double lambda, std::ostream& os) {
  const BeamState s = lambda_example(lambda);
  const BeamState d = environment_decohere(s, third_beam_marker());
  const double contrast = traditional_visibility(s).value;
  const double contrast_d = traditional_visibility(d).value;
  const bool exceeds = contrast_d > contrast;

  if (g.format == Format::json) {
    ordered_json doc;
    doc["lambda"] = lambda;
    doc["contrast"] = contrast;
    doc["contrast_decohered"] = contrast_d;
    doc["V"] = generalized_visibility(s);
    doc["V_decohered"] = generalized_visibility(d);
    doc["P"] = generalized_predictability(s);
    doc["decohered_exceeds"] = exceeds;
    emit_json(os, doc);
    return kExitOk;
  }
  os << "lambda,contrast,contrast_decohered,V,V_decohered,P,decohered_exceeds\n"
     << format_number(lambda) << ',' << format_number(contrast) << ',' << format_number(contrast_d) << ','
     << format_number(generalized_visibility(s)) << ',' << format_number(generalized_visibility(d)) << ','
     << format_number(generalized_predictability(s)) << ',' << (exceeds ? "true" : "false") << '\n';
  return kExitOk;
}

// --- check ----------------------------------------------------------------------

struct CheckArgs {
  int n = 3;
  int trials = 1000;
  bool inject_invalid = false;
};

BeamState invalid_state(int n) {
  CMatrix rho = CMatrix::Zero(n, n);
  rho(0, 0) = 1.5;
  rho(1, 1) = -0.5;
  return BeamState::unchecked(rho);
}

int cmd_check(const Globals& g, const CheckArgs& a, std::ostream& os, std::ostream& err) {
  Rng rng(g.seed);
  AuditSummary summary = audit_random(a.n, a.trials, StateFamily::mixed, rng);

  Rng chain_rng = rng.derive(1);
  for (int t = 0; t < a.trials; ++t) {
    const int rank = t % 2 == 0 ? 1 : a.n;
    std::vector<CVector> chis;
    for (int i = 0; i < a.n; ++i) chis.push_back(random_unit_vector(2, chain_rng));
    const JointState j = entangle(BeamState::from_matrix(random_density(a.n, rank, chain_rng)),
                                  DetectorStates::from_vectors(std::move(chis)));
    const Vec3 dir(chain_rng.normal(), chain_rng.normal(), chain_rng.normal());
    for (const auto& r : chain_check(j, qubit_pvm(dir))) summary.record(r);
  }
  if (a.inject_invalid) {
    for (const auto& r : audit_state(invalid_state(a.n))) summary.record(r);
  }

  if (g.format == Format::json) {
    ordered_json doc;
    doc["n"] = a.n;
    doc["trials"] = a.trials;
    doc["seed"] = g.seed;
    doc["min_slack"] = summary.min_slack;
    doc["max_violation"] = summary.max_violation;
    doc["violations"] = summary.violations;
    ordered_json checks;
    for (const auto& [name, t] : summary.checks) {
      checks[name] = {{"evaluated", t.evaluated},
                      {"saturated", t.saturated},
                      {"violations", t.violations},
                      {"min_slack", t.min_slack}};
    }
    doc["checks"] = std::move(checks);
    emit_json(os, doc);
  } else {
    os << "check,evaluated,saturated,violations,min_slack\n";
    for (const auto& [name, t] : summary.checks) {
      os << name << ',' << t.evaluated << ',' << t.saturated << ',' << t.violations << ','
         << format_number(t.min_slack) << '\n';
    }
  }
  if (!summary.ok()) {
    err << "check: " << summary.violations << " violation(s), worst " << format_number(summary.max_violation) << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

// --- optimize -------------------------------------------------------------------

int cmd_optimize(const Globals& g, const std::string& path, std::ostream& os, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "optimize: cannot read " << path << '\n';
    return kExitUsage;
  }
  std::stringstream text;
  text << in.rdbuf();
  std::optional<OptimizeConfig> cfg;
  try {
    cfg.emplace(parse_optimize_config(text.str()));
  } catch (const Error& e) {
    err << "optimize: " << e.what() << '\n';
    return kExitUsage;
  }

  Rng rng(g.seed);
  const JointState j = entangle(cfg->beam, cfg->detector);
  const OptimizationResult r = distinguishability_numeric(j, cfg->measure, cfg->search, rng);
  for (const auto& w : r.warnings) err << "optimize: warning: " << w << '\n';
  const auto& elements = *r.best_povm.bloch();

  if (g.format == Format::json) {
    ordered_json doc;
    doc["measure"] = std::string(to_string(r.measure));
    doc["value"] = r.value;
    doc["converged"] = r.converged;
    doc["restarts"] = r.restarts_used;
    ordered_json list = ordered_json::array();
    for (const auto& e : elements) {
      list.push_back({{"weight", e.weight}, {"direction", {e.vector.x(), e.vector.y(), e.vector.z()}}});
    }
    doc["elements"] = std::move(list);
    doc["warnings"] = r.warnings;
    emit_json(os, doc);
    return kExitOk;
  }
  os << "measure,value,element,weight,mx,my,mz\n";
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto& e = elements[k];
    os << to_string(r.measure) << ',' << format_number(r.value) << ',' << k << ',' << format_number(e.weight) << ','
       << format_number(e.vector.x()) << ',' << format_number(e.vector.y()) << ',' << format_number(e.vector.z())
       << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Visibility, predictability and which-way knowledge for multi-beam interference", "multibeam"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option_function<std::string>(
         "--format", [&g](const std::string& f) { g.format = f == "json" ? Format::json : Format::csv; },
         "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_str("csv");
  app.add_option("--out", g.out_path, "Output file (default stdout)");

  FigureArgs fig;
  auto* figure = app.add_subcommand("figure", "Theta scan of V, D and the duality sum for the symmetric three-beam family");
  figure->add_option("--grid", fig.grid, "Theta points over [0, pi]")->check(CLI::Range(2, 100000))->capture_default_str();
  figure->add_flag("--no-optimize", fig.no_optimize, "Closed-form columns only");
  figure->add_flag("--tilde", fig.tilde, "Add the D_tilde column (K~ search)");
  figure->add_flag("--cross-check", fig.cross_check, "Add D_search from the general POVM search");
  figure->add_option("--restarts", fig.restarts, "Restarts per POVM search")->check(CLI::Range(1, 100000))->capture_default_str();
  figure->add_option("--max-elements", fig.max_elements, "POVM elements")->check(CLI::Range(2, 16))->capture_default_str();

  double lambda = 0.5;
  auto* lambda_cmd = app.add_subcommand("lambda-example", "Contrast before and after selective decoherence");
  lambda_cmd->add_option("--lambda", lambda, "Coherence parameter, 0 <= lambda < 1")->capture_default_str();

  CheckArgs chk;
  auto* check = app.add_subcommand("check", "Audit duality and trace inequalities on random states");
  check->add_option("--n", chk.n, "Beam count")->check(CLI::Range(2, 8))->capture_default_str();
  check->add_option("--trials", chk.trials, "Random states")->check(CLI::Range(1, 100000000))->capture_default_str();
  check->add_flag("--inject-invalid", chk.inject_invalid, "Add a non-physical state (harness self-test)");

  std::string config_path;
  auto* optimize = app.add_subcommand("optimize", "Maximize which-way knowledge over POVMs from a JSON config");
  optimize->add_option("config", config_path, "JSON config file")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (lambda_cmd->parsed() && !(lambda >= 0.0 && lambda < 1.0)) {
    err << "lambda-example: lambda must satisfy 0 <= lambda < 1\n";
    return kExitUsage;
  }

  std::ofstream file;
  if (!g.out_path.empty()) {
    file.open(g.out_path);
    if (!file) {
      err << "cannot open " << g.out_path << " for writing\n";
      return kExitUsage;
    }
  }
  std::ostream& os = g.out_path.empty() ? out : file;

  try {
    if (figure->parsed()) return cmd_figure(g, fig, os);
    if (lambda_cmd->parsed()) return cmd_lambda(g, lambda, os);
    if (check->parsed()) return cmd_check(g, chk, os, err);
    if (optimize->parsed()) return cmd_optimize(g, config_path, os, err);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "unexpected failure: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace multibeam::cli
