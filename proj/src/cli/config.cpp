#include <cstdio>
#include <set>

#include <json.hpp>

#include "multibeam/cli.hpp"
#include "multibeam/error.hpp"

namespace multibeam::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) bad("unknown key '" + key + "' in " + where);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  return v.get<double>();
}

Complex complex_entry(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) bad(where + " must be a [re, im] pair");
  return {number(v[0], where), number(v[1], where)};
}

int positive_int(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000) {
    bad(where + " must be a positive integer");
  }
  return v.get<int>();
}

CMatrix read_rho(const json& beam) {
  only_keys(beam, {"rho"}, "beam");
  if (!beam.contains("rho")) bad("beam.rho is required");
  const json& rows = beam["rho"];
  if (!rows.is_array() || rows.empty()) bad("beam.rho must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) bad("beam.rho must be square");
    for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = complex_entry(row[static_cast<std::size_t>(j)], "beam.rho entry");
  }
  return rho;
}

DetectorStates read_detector(const json& det) {
  only_keys(det, {"bloch", "vectors"}, "detector");
  if (det.contains("bloch") == det.contains("vectors")) bad("detector needs exactly one of 'bloch' or 'vectors'");
  if (det.contains("bloch")) {
    const json& list = det["bloch"];
    if (!list.is_array() || list.empty()) bad("detector.bloch must be a non-empty array");
    std::vector<Vec3> dirs;
    for (const auto& v : list) {
      if (!v.is_array() || v.size() != 3) bad("detector.bloch entries must be [x, y, z]");
      dirs.emplace_back(number(v[0], "bloch"), number(v[1], "bloch"), number(v[2], "bloch"));
    }
    return DetectorStates::from_bloch(dirs);
  }
  const json& list = det["vectors"];
  if (!list.is_array() || list.empty()) bad("detector.vectors must be a non-empty array");
  std::vector<CVector> chis;
  for (const auto& v : list) {
    if (!v.is_array() || v.empty()) bad("detector.vectors entries must be arrays of [re, im]");
    CVector chi(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) chi(static_cast<Eigen::Index>(k)) = complex_entry(v[k], "vector entry");
    chis.push_back(std::move(chi));
  }
  return DetectorStates::from_vectors(std::move(chis));
}

}  // namespace

OptimizeConfig parse_optimize_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  only_keys(root, {"beam", "detector", "measure", "max_elements", "restarts"}, "config");
  if (!root.contains("beam")) bad("'beam' is required");
  if (!root.contains("detector")) bad("'detector' is required");

  try {
    BeamState beam = BeamState::from_matrix(read_rho(root["beam"]));
    DetectorStates detector = read_detector(root["detector"]);
    if (detector.count() != beam.beam_count()) bad("detector must list one state per beam");

    Measure measure = Measure::knowledge;
    if (root.contains("measure")) {
      const json& m = root["measure"];
      if (m == "K") measure = Measure::knowledge;
      else if (m == "Ktilde") measure = Measure::knowledge_quadrature;
      else bad("measure must be \"K\" or \"Ktilde\"");
    }
    SearchOptions search;
    if (root.contains("max_elements")) {
      search.max_elements = positive_int(root["max_elements"], "max_elements");
      if (search.max_elements < 2) bad("max_elements must be at least 2");
    }
    if (root.contains("restarts")) search.restarts = positive_int(root["restarts"], "restarts");
    return OptimizeConfig{std::move(beam), std::move(detector), measure, search};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    bad(e.what());
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace multibeam::cli
