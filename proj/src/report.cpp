#include "gmshadow/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "gmshadow/error.hpp"

namespace gmshadow {

using nlohmann::json;

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string relation_text(Relation r) {
  switch (r) {
    case Relation::less: return "<";
    case Relation::less_equal: return "<=";
    case Relation::greater: return ">";
    case Relation::greater_equal: return ">=";
  }
  return "?";
}

json inequality_json(const Inequality& q) {
  return json{{"label", q.label},
              {"lhs", finite_or_null(q.lhs)},
              {"relation", relation_text(q.rel)},
              {"rhs", finite_or_null(q.rhs)},
              {"holds", q.holds()}};
}

json violations_json(const ViolationReport& v) {
  json arr = json::array();
  for (const auto& x : v.violations)
    arr.push_back({{"check", x.check}, {"index", x.index}, {"value", finite_or_null(x.value)},
                   {"bound", finite_or_null(x.bound)}});
  return arr;
}

}  // namespace

RunAnalysis analyze(const ScenarioConfig& sc, const RunResult& res) {
  RunAnalysis a;
  FitConfig fc;
  fc.overflow_guard = sc.integrator.overflow_guard;
  a.blowup = fit_blowup(res.records, sc.params, fc);
  if (res.termination != Termination::blowup_suspected && a.blowup.detected) {
    a.blowup.detected = false;
    a.blowup.classification = BlowUpClass::growth_no_fit;
    a.blowup.notes.push_back("run ended without a blow-up event; fit not promoted to detection");
  }
  a.violations = check_monotone_bounds(res.records, sc.params);
  if (sc.preset && (*sc.preset == "region-blowup" || *sc.preset == "region-global"))
    a.region = check_region_invariance(res.records, sc.params);
  if (res.snapshots.size() >= 2 && res.termination == Termination::blowup_suspected) {
    a.single_point = blowup_set_check(res.grid, res.snapshots, res.records);
    a.blowup.single_point = a.single_point->single_point;
    a.blowup.argmax_drift = a.single_point->argmax_drift;
  }
  if (a.blowup.detected && sc.geometry.kind == GeometryKind::ball) {
    try {
      a.profile = profile_extract(res.grid, res.snapshots.back().values, sc.params);
      a.blowup.profile_slope = a.profile->slope;
    } catch (const DomainError& e) {
      a.blowup.notes.push_back(std::string("profile: ") + e.what());
    }
  }
  a.preset_check = check_preset(sc);
  return a;
}

void write_trajectory_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& recs) {
  os << "t,dt,u_mean,u_max,u_min,argmax_rho,zeta,z,w,J,I,u_neg_delta_avg,K_of_t\n";
  for (const auto& r : recs) {
    for (double v : {r.t, r.dt, r.u_mean, r.u_max, r.u_min, r.argmax_rho, r.zeta, r.z, r.w}) {
      put(os, v);
      os << ',';
    }
    if (r.J) put(os, *r.J);
    os << ',';
    if (r.I) put(os, *r.I);
    os << ',';
    put(os, r.u_neg_delta_avg);
    os << ',';
    put(os, r.K);
    os << '\n';
  }
}

std::string format_time(double t) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, res.ptr);
}

json regime_json(const RegimeReport& r) {
  json tags = json::array();
  for (const auto& t : r.theorem_tags) {
    json checks = json::array();
    for (const auto& q : t.checks) checks.push_back(inequality_json(q));
    tags.push_back({{"name", t.name}, {"checks", checks}});
  }
  return json{{"turing", r.turing},
              {"anti_turing", r.anti_turing},
              {"boundary", r.boundary},
              {"net_exponent", r.net_exponent},
              {"theorem_tags", tags}};
}

json blowup_json(const BlowUpReport& b, const RunAnalysis& a) {
  json j{{"detected", b.detected},
         {"T_est", finite_or_null(b.T_est)},
         {"beta_fit", finite_or_null(b.beta_fit)},
         {"beta_theory", b.beta_theory},
         {"C_fit", finite_or_null(b.C_fit)},
         {"fit_window", {b.fit_window[0], b.fit_window[1]}},
         {"fit_records", b.fit_records},
         {"fit_r2", finite_or_null(b.fit_r2)},
         {"single_point", b.single_point ? json(*b.single_point) : json(nullptr)},
         {"argmax_drift", b.argmax_drift ? json(*b.argmax_drift) : json(nullptr)},
         {"profile_slope", b.profile_slope ? json(*b.profile_slope) : json(nullptr)},
         {"classification", to_string(b.classification)},
         {"notes", b.notes}};
  if (a.single_point) {
    const auto& s = *a.single_point;
    j["blowup_set"] = {{"argmax_fixed", s.argmax_fixed},
                       {"moment_bound", s.moment_bound ? json(*s.moment_bound) : json(nullptr)},
                       {"moment_ratio", s.moment_ratio},
                       {"far_bounded", s.far_bounded},
                       {"far_ratio", s.far_ratio},
                       {"center_growth", s.center_growth},
                       {"rho0", s.rho0},
                       {"verdict", s.verdict}};
  }
  if (a.profile) {
    const auto& p = *a.profile;
    json rows = json::array();
    for (const auto& r : p.rows) rows.push_back({r.rho, r.u, r.power_fit, r.log_fit});
    j["profile"] = {{"slope", p.slope},
                    {"predicted_slope", p.predicted_slope},
                    {"power_residual", p.power_residual},
                    {"log_exponent", p.log_exponent},
                    {"predicted_log_exponent", p.predicted_exponent},
                    {"log_residual", p.log_residual},
                    {"range", {p.rho_lo, p.rho_hi}},
                    {"columns", {"rho", "u", "power_fit", "log_fit"}},
                    {"rows", rows}};
  }
  return j;
}

json write_outputs(const ScenarioConfig& sc, const RunResult& res, const RunAnalysis& a, const std::string& root) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(root) / sc.name;
  fs::create_directories(dir / "snapshots");
  {
    std::ofstream os(dir / "trajectory.csv");
    if (!os) throw std::runtime_error("cannot write " + (dir / "trajectory.csv").string());
    write_trajectory_csv(os, res.records);
  }
  json snaps = json::array();
  for (const auto& s : res.snapshots) {
    const std::string rel = "snapshots/t=" + format_time(s.t) + ".csv";
    write_snapshot_csv((dir / rel).string(), res.grid, s.values);
    snaps.push_back({{"t", s.t}, {"path", rel}});
  }

  HypothesisContext ctx;
  if (sc.geometry.kind == GeometryKind::ball) ctx.dimension = sc.geometry.dimension;
  json regime = regime_json(classify_regime(sc.params, ctx));
  if (sc.preset) {
    json checks = json::array();
    for (const auto& c : a.preset_check.checks) {
      json q = inequality_json(c.inequality);
      q["enforced"] = c.enforced;
      checks.push_back(q);
    }
    regime["preset_check"] = {{"preset", *sc.preset}, {"checks", checks}, {"notes", a.preset_check.notes}};
  }

  json violations = violations_json(a.violations);
  if (a.region)
    for (auto& v : violations_json(*a.region)) violations.push_back(v);

  json summary{{"scenario", sc.name},
               {"params",
                {{"p", sc.params.p},
                 {"q", sc.params.q},
                 {"r", sc.params.r},
                 {"s", sc.params.s},
                 {"gamma", sc.params.gamma},
                 {"rho_index", sc.params.rho_index}}},
               {"regime", regime},
               {"termination",
                {{"event", to_string(res.termination)},
                 {"message", res.message},
                 {"t_final", res.t_final},
                 {"steps", res.steps},
                 {"records", res.records.size()}}},
               {"records_path", "trajectory.csv"},
               {"snapshots", snaps},
               {"blowup_report", blowup_json(a.blowup, a)},
               {"violations", violations}};
  std::ofstream os(dir / "summary.json");
  if (!os) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
  os << summary.dump(2) << '\n';
  return summary;
}

std::string resolve_output_root(const std::string& cli_out, const ScenarioConfig& sc) {
  if (!cli_out.empty()) return cli_out;
  if (!sc.output_dir.empty()) return sc.output_dir;
  if (const char* env = std::getenv("GMSHADOW_OUT"); env && *env) return env;
  return "gmshadow-out";
}

}  // namespace gmshadow
