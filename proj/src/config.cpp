#include "gmshadow/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "gmshadow/diagnostics.hpp"
#include "gmshadow/error.hpp"
#include "gmshadow/integrator.hpp"
#include "gmshadow/spectral.hpp"
#include "gmshadow/toml_lite.hpp"

namespace gmshadow {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"", {"name", "preset", "params", "geometry", "initial", "integrator", "time", "diagnostics", "output_dir"}},
      {"params", {"p", "q", "r", "s"}},
      {"geometry", {"kind", "dimension", "length", "points"}},
      {"integrator",
       {"scheme", "cfl_safety", "reaction_safety", "dt_min", "dt_max", "overflow_guard", "steady_tol", "step_tol"}},
      {"time", {"t_end", "record_cadence", "snapshot_times", "snapshot_decades"}},
      {"diagnostics", {"delta"}},
  };
  return s;
}

const std::map<std::string, std::set<std::string>>& initial_keys() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"constant", {"type", "value"}},
      {"perturbed", {"type", "value", "eps", "mode"}},
      {"spiky", {"type", "lambda", "delta"}},
      {"file", {"type", "path"}},
  };
  return s;
}

void check_keys(const json& obj, const std::string& section, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError((section.empty() ? "config" : section) + ": expected a table");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + (section.empty() ? "" : section + ".") + it.key() + "'");
}

double number(const json& obj, const std::string& key, const std::string& field, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(field + " must be a number");
  return v.get<double>();
}

long long integer(const json& obj, const std::string& key, const std::string& field, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float() && v.get<double>() == std::floor(v.get<double>())) return (long long)v.get<double>();
  throw ConfigError(field + " must be an integer");
}

std::string text(const json& obj, const std::string& key, const std::string& field, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(field + " must be a string");
  return v.get<std::string>();
}

Scheme parse_scheme(const std::string& s) {
  if (s == "explicit-rk" || s == "explicit-rk4-adaptive" || s == "explicit") return Scheme::explicit_rk;
  if (s == "imex-cn" || s == "imex") return Scheme::imex_cn;
  throw ConfigError("integrator.scheme must be 'explicit-rk' or 'imex-cn' (got '" + s + "')");
}

std::string kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::constant: return "constant";
    case InitialKind::perturbed: return "perturbed";
    case InitialKind::spiky: return "spiky";
    case InitialKind::file: return "file";
  }
  return "constant";
}

json geometry_json(const Geometry& g, std::size_t points) {
  json j;
  if (g.kind == GeometryKind::ball) {
    j["kind"] = "ball";
    j["dimension"] = g.dimension;
  } else {
    j["kind"] = "interval";
    j["length"] = g.length;
  }
  j["points"] = points;
  return j;
}

json params_json(double p, double q, double r, double s) { return json{{"p", p}, {"q", q}, {"r", r}, {"s", s}}; }

double lyapunov_of(const ScenarioConfig& sc) {
  Grid grid = scenario_grid(sc);
  Field u0 = scenario_initial(sc, grid);
  auto rec = compute_record(grid, sc.params, u0, 0.0, sc.delta_diag);
  return rec.J.value_or(NAN);
}

}  // namespace

void set_dotted(json& doc, const std::string& key, const json& value) {
  json* cur = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("malformed key '" + key + "'");
    if (dot == std::string::npos) {
      (*cur)[part] = value;
      return;
    }
    json& next = (*cur)[part];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("key '" + key + "' descends into a non-table value");
    cur = &next;
    start = dot + 1;
  }
}

const std::vector<PresetInfo>& preset_catalogue() {
  static const std::vector<PresetInfo> c = {
      {"turing-instability", "u = 1 is linearly unstable iff mu_2^2 < p - 1 (Turing condition p - r*gamma < 1 keeps the mean mode stable)"},
      {"ode-blowup", "homogeneous blow-up: p >= r, p - r*gamma > 1 and mean(u0) > 1 give finite-time blow-up"},
      {"variational-blowup", "r = p + 1, gamma < min{1,(p-1)/(p+1)}: J(u0) <= 0 implies finite-time blow-up"},
      {"variational-global", "r = p + 1, (p-1)/(p+1) < gamma < 1, 1 < p < (N+2)/(N-2): global-in-time solution"},
      {"small-rho-global", "(p-1)/r < min{1, 2/N, (1-1/r)/2}, 0 < gamma < 1: global-in-time solution"},
      {"region-blowup", "0 < gamma < 1, r <= 1, (p-1)/r > 1 and w(0) < zeta(0)^{1-gamma}: finite-time blow-up"},
      {"region-global", "gamma > 1, r >= 1, (p-1)/r < 1, w(0) < zeta(0)^{1-gamma}, zeta(0)^{1+gamma} > z(0): global solution"},
      {"ddi-spiky", "N >= 3, 1 <= r <= p, p > N/(N-2), 2/N < (p-1)/r < gamma: spiky data blow up (diffusion-driven)"},
      {"rate-fit", "N >= 3, max{r, N/(N-2)} < p < (N+2)/(N-2), 2/N < (p-1)/r < gamma: rate (T-t)^{-1/(p-1)}"},
      {"variational-boundary", "r = p + 1, gamma = (p-1)/(p+1), J(u0) < 0: unbounded growth, infinite-time blow-up expected (documentation only)"},
  };
  return c;
}

json preset_json(const std::string& name) {
  json j;
  j["name"] = name;
  j["preset"] = name;
  if (name == "turing-instability") {
    j["params"] = params_json(2, 1, 2, 0);
    j["geometry"] = geometry_json(Geometry::interval(2.0 * std::numbers::pi), 129);
    j["initial"] = {{"type", "perturbed"}, {"value", 1.0}, {"eps", 1e-4}, {"mode", 2}};
    j["integrator"] = {{"steady_tol", 0.0}};
    j["time"] = {{"t_end", 8.0}, {"record_cadence", 0.05}};
  } else if (name == "ode-blowup") {
    j["params"] = params_json(3, 1, 1, 0);
    j["geometry"] = geometry_json(Geometry::interval(1.0), 33);
    j["initial"] = {{"type", "constant"}, {"value", 2.0}};
    j["time"] = {{"t_end", 2.0}, {"record_cadence", 0.01}};
  } else if (name == "variational-blowup" || name == "variational-boundary") {
    const bool boundary = name == "variational-boundary";
    j["params"] = boundary ? params_json(3, 0.5, 4, 0) : params_json(3, 0.25, 4, 0);
    j["geometry"] = geometry_json(Geometry::interval(boundary ? 4.0 : 1.0), boundary ? 65 : 129);
    j["integrator"] = {{"steady_tol", 0.0}};
    j["time"] = {{"t_end", boundary ? 20.0 : 5.0}, {"record_cadence", boundary ? 0.1 : 0.01}};
    // scale the amplitude until the Lyapunov functional is nonpositive
    double amp = 1.0;
    for (int it = 0; it < 60; ++it) {
      j["initial"] = {{"type", "perturbed"}, {"value", amp}, {"eps", (boundary ? 0.5 : 0.3) * amp}, {"mode", 2}};
      json probe = j;
      probe.erase("preset");
      const double jv = lyapunov_of(config_from_json(probe));
      if (boundary ? jv < 0.0 : jv <= 0.0) break;
      amp *= 1.25;
    }
  } else if (name == "variational-global") {
    j["params"] = params_json(3, 0.7, 4, 0);
    j["geometry"] = geometry_json(Geometry::ball(3), 33);
    j["initial"] = {{"type", "perturbed"}, {"value", 1.0}, {"eps", 0.3}, {"mode", 2}};
    j["integrator"] = {{"steady_tol", 0.0}};
    j["time"] = {{"t_end", 50.0}, {"record_cadence", 0.25}};
  } else if (name == "small-rho-global") {
    j["params"] = params_json(1.5, 0.5, 4, 0);
    j["geometry"] = geometry_json(Geometry::ball(3), 33);
    j["initial"] = {{"type", "perturbed"}, {"value", 1.0}, {"eps", 0.3}, {"mode", 2}};
    j["integrator"] = {{"steady_tol", 0.0}};
    j["time"] = {{"t_end", 20.0}, {"record_cadence", 0.25}};
  } else if (name == "region-blowup") {
    j["params"] = params_json(3, 0.5, 1, 0);
    j["geometry"] = geometry_json(Geometry::interval(1.0), 65);
    j["initial"] = {{"type", "perturbed"}, {"value", 2.0}, {"eps", 0.5}, {"mode", 2}};
    j["time"] = {{"t_end", 2.0}, {"record_cadence", 0.005}};
  } else if (name == "region-global") {
    j["params"] = params_json(2, 2, 2, 0);
    j["geometry"] = geometry_json(Geometry::interval(1.0), 65);
    j["initial"] = {{"type", "perturbed"}, {"value", 1.0}, {"eps", 0.3}, {"mode", 2}};
    j["integrator"] = {{"steady_tol", 0.0}};
    j["time"] = {{"t_end", 50.0}, {"record_cadence", 0.25}};
  } else if (name == "ddi-spiky" || name == "rate-fit") {
    j["params"] = params_json(4, 3.5, 1, 0);
    j["geometry"] = geometry_json(Geometry::ball(3), name == "ddi-spiky" ? 4096 : 2048);
    j["initial"] = {{"type", "spiky"}, {"lambda", 0.05}, {"delta", 0.02}};
    j["integrator"] = {{"dt_min", 1e-18}};
    j["time"] = {{"t_end", 0.45}, {"record_cadence", 1e-6}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return j;
}

ScenarioConfig preset(const std::string& name) { return config_from_json(json{{"preset", name}}); }

json parse_config_text(const std::string& body, const std::string& format, const std::string& source) {
  if (format == "toml") return parse_toml(body, source);
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, body.size());
    const auto line = 1 + std::count(body.begin(), body.begin() + std::ptrdiff_t(upto), '\n');
    throw ConfigError(source + ":" + std::to_string(line) + ": JSON parse error: " + e.what());
  }
}

json load_config_document(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string ext = std::filesystem::path(path).extension().string();
  json doc = parse_config_text(ss.str(), ext == ".toml" ? "toml" : "json", path);
  if (doc.contains("initial") && doc["initial"].is_object() && doc["initial"].contains("path") &&
      doc["initial"]["path"].is_string()) {
    std::filesystem::path p = doc["initial"]["path"].get<std::string>();
    if (p.is_relative()) doc["initial"]["path"] = (std::filesystem::path(path).parent_path() / p).string();
  }
  return doc;
}

ScenarioConfig load_config(const std::string& path) { return config_from_json(load_config_document(path)); }

ScenarioConfig config_from_json(const json& input) {
  check_keys(input, "", schema().at(""));
  json doc = input;
  std::optional<std::string> preset_name;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) throw ConfigError("preset must be a string");
    preset_name = doc["preset"].get<std::string>();
    json base = preset_json(*preset_name);
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& k = it.key();
      const bool wholesale = (k == "initial" && it->is_object() && it->contains("type")) ||
                             (k == "geometry" && it->is_object() && it->contains("kind"));
      if (it->is_object() && base.contains(k) && base[k].is_object() && !wholesale)
        base[k].update(*it);
      else
        base[k] = *it;
    }
    doc = std::move(base);
  }

  ScenarioConfig sc;
  sc.preset = preset_name;
  sc.name = text(doc, "name", "name", preset_name.value_or("scenario"));
  if (sc.name.empty() || sc.name.find('/') != std::string::npos) throw ConfigError("name must be a nonempty plain name");

  if (!doc.contains("params")) throw ConfigError("params is required (p, q, r, s)");
  const json& pj = doc["params"];
  check_keys(pj, "params", schema().at("params"));
  for (const char* k : {"p", "q", "r", "s"})
    if (!pj.contains(k)) throw ConfigError(std::string("params.") + k + " is required");
  try {
    sc.params = validate_params(number(pj, "p", "params.p", 0), number(pj, "q", "params.q", 0),
                                number(pj, "r", "params.r", 0), number(pj, "s", "params.s", 0));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }

  if (doc.contains("geometry")) {
    const json& g = doc["geometry"];
    check_keys(g, "geometry", schema().at("geometry"));
    const std::string kind = text(g, "kind", "geometry.kind", "interval");
    if (kind == "interval") {
      if (g.contains("dimension")) throw ConfigError("geometry.dimension applies to ball geometry only");
      sc.geometry = Geometry::interval(number(g, "length", "geometry.length", 1.0));
      if (!(sc.geometry.length > 0.0)) throw ConfigError("geometry.length must be positive");
    } else if (kind == "ball") {
      if (g.contains("length") && number(g, "length", "geometry.length", 1.0) != 1.0)
        throw ConfigError("geometry.length must be 1 for ball geometry (unit radius)");
      const long long n = integer(g, "dimension", "geometry.dimension", 3);
      if (n < 1) throw ConfigError("geometry.dimension must be >= 1");
      sc.geometry = Geometry::ball(int(n));
    } else {
      throw ConfigError("geometry.kind must be 'interval' or 'ball'");
    }
    const long long pts = integer(g, "points", "geometry.points", 101);
    if (pts < 16) throw ConfigError("geometry.points must be at least 16");
    sc.points = std::size_t(pts);
  }

  if (doc.contains("initial")) {
    const json& in = doc["initial"];
    if (!in.is_object()) throw ConfigError("initial: expected a table");
    const std::string type = text(in, "type", "initial.type", "constant");
    auto allowed = initial_keys().find(type);
    if (allowed == initial_keys().end())
      throw ConfigError("initial.type must be one of constant, perturbed, spiky, file (got '" + type + "')");
    check_keys(in, "initial", allowed->second);
    InitialSpec& s = sc.initial;
    if (type == "constant") {
      s.kind = InitialKind::constant;
      s.value = number(in, "value", "initial.value", 1.0);
    } else if (type == "perturbed") {
      s.kind = InitialKind::perturbed;
      s.value = number(in, "value", "initial.value", 1.0);
      s.eps = number(in, "eps", "initial.eps", 0.0);
      const long long mode = integer(in, "mode", "initial.mode", 2);
      if (mode < 1) throw ConfigError("initial.mode must be >= 1");
      s.mode = std::size_t(mode);
    } else if (type == "spiky") {
      s.kind = InitialKind::spiky;
      s.lambda = number(in, "lambda", "initial.lambda", 1.0);
      s.delta = number(in, "delta", "initial.delta", 0.1);
      if (sc.geometry.kind != GeometryKind::ball) throw ConfigError("initial.type 'spiky' requires ball geometry");
    } else {
      s.kind = InitialKind::file;
      s.path = text(in, "path", "initial.path", "");
      if (s.path.empty()) throw ConfigError("initial.path is required for file initial data");
    }
  }

  if (doc.contains("integrator")) {
    const json& ij = doc["integrator"];
    check_keys(ij, "integrator", schema().at("integrator"));
    IntegratorConfig& c = sc.integrator;
    c.scheme = parse_scheme(text(ij, "scheme", "integrator.scheme", "explicit-rk"));
    c.cfl_safety = number(ij, "cfl_safety", "integrator.cfl_safety", c.cfl_safety);
    c.reaction_safety = number(ij, "reaction_safety", "integrator.reaction_safety", c.reaction_safety);
    c.dt_min = number(ij, "dt_min", "integrator.dt_min", c.dt_min);
    c.dt_max = number(ij, "dt_max", "integrator.dt_max", c.dt_max);
    c.overflow_guard = number(ij, "overflow_guard", "integrator.overflow_guard", c.overflow_guard);
    c.steady_tol = number(ij, "steady_tol", "integrator.steady_tol", c.steady_tol);
    c.step_tol = number(ij, "step_tol", "integrator.step_tol", c.step_tol);
  }
  sc.integrator.validate();

  if (doc.contains("time")) {
    const json& tj = doc["time"];
    check_keys(tj, "time", schema().at("time"));
    TimeConfig& t = sc.time;
    t.t_end = number(tj, "t_end", "time.t_end", t.t_end);
    t.record_cadence = number(tj, "record_cadence", "time.record_cadence", t.record_cadence);
    if (tj.contains("snapshot_times")) {
      const json& st = tj["snapshot_times"];
      if (!st.is_array()) throw ConfigError("time.snapshot_times must be an array of numbers");
      t.snapshot_times.clear();
      for (const auto& v : st) {
        if (!v.is_number()) throw ConfigError("time.snapshot_times must be an array of numbers");
        t.snapshot_times.push_back(v.get<double>());
      }
    }
    if (tj.contains("snapshot_decades")) {
      if (!tj["snapshot_decades"].is_boolean()) throw ConfigError("time.snapshot_decades must be a boolean");
      t.snapshot_decades = tj["snapshot_decades"].get<bool>();
    }
  }
  if (!(sc.time.t_end > 0.0) || !std::isfinite(sc.time.t_end)) throw ConfigError("time.t_end must be positive");
  if (!(sc.time.record_cadence >= 0.0)) throw ConfigError("time.record_cadence must be nonnegative");
  for (double s : sc.time.snapshot_times)
    if (!(s >= 0.0)) throw ConfigError("time.snapshot_times must be nonnegative");

  if (doc.contains("diagnostics")) {
    const json& dj = doc["diagnostics"];
    check_keys(dj, "diagnostics", schema().at("diagnostics"));
    sc.delta_diag = number(dj, "delta", "diagnostics.delta", sc.delta_diag);
  }
  if (!(sc.delta_diag > 0.0)) throw ConfigError("diagnostics.delta must be positive");
  sc.output_dir = text(doc, "output_dir", "output_dir", "");

  // constructing the data validates the cross-field constraints (positivity, spiky resolution, file rows)
  try {
    Grid grid = scenario_grid(sc);
    (void)scenario_initial(sc, grid);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }

  if (sc.preset) {
    PresetCheck pc = check_preset(sc);
    if (!pc.enforced_ok()) {
      std::string msg = "preset '" + *sc.preset + "' hypotheses fail:";
      for (const auto& c : pc.checks)
        if (c.enforced && !c.inequality.holds()) msg += " [" + c.inequality.label + "]";
      throw ConfigError(msg);
    }
  }
  return sc;
}

json config_to_json(const ScenarioConfig& sc) {
  json j;
  j["name"] = sc.name;
  if (sc.preset) j["preset"] = *sc.preset;
  j["params"] = params_json(sc.params.p, sc.params.q, sc.params.r, sc.params.s);
  j["geometry"] = geometry_json(sc.geometry, sc.points);
  json in;
  in["type"] = kind_name(sc.initial.kind);
  switch (sc.initial.kind) {
    case InitialKind::constant: in["value"] = sc.initial.value; break;
    case InitialKind::perturbed:
      in["value"] = sc.initial.value;
      in["eps"] = sc.initial.eps;
      in["mode"] = sc.initial.mode;
      break;
    case InitialKind::spiky:
      in["lambda"] = sc.initial.lambda;
      in["delta"] = sc.initial.delta;
      break;
    case InitialKind::file: in["path"] = sc.initial.path; break;
  }
  j["initial"] = in;
  const IntegratorConfig& c = sc.integrator;
  j["integrator"] = {{"scheme", to_string(c.scheme)},         {"cfl_safety", c.cfl_safety},
                     {"reaction_safety", c.reaction_safety}, {"dt_min", c.dt_min},
                     {"dt_max", c.dt_max},                   {"overflow_guard", c.overflow_guard},
                     {"steady_tol", c.steady_tol},           {"step_tol", c.step_tol}};
  j["time"] = {{"t_end", sc.time.t_end},
               {"record_cadence", sc.time.record_cadence},
               {"snapshot_times", sc.time.snapshot_times},
               {"snapshot_decades", sc.time.snapshot_decades}};
  j["diagnostics"] = {{"delta", sc.delta_diag}};
  if (!sc.output_dir.empty()) j["output_dir"] = sc.output_dir;
  return j;
}

bool PresetCheck::enforced_ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return !c.enforced || c.inequality.holds(); });
}

bool PresetCheck::all_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.inequality.holds(); });
}

PresetCheck check_preset(const ScenarioConfig& sc) {
  PresetCheck pc;
  if (!sc.preset) return pc;
  const std::string& name = *sc.preset;
  pc.preset = name;
  const ModelParams& m = sc.params;
  std::optional<int> dim;
  if (sc.geometry.kind == GeometryKind::ball) dim = sc.geometry.dimension;

  auto add = [&](Inequality q, bool enforced = true) { pc.checks.push_back({std::move(q), enforced}); };
  auto add_tag = [&](const std::string& tag) {
    auto hyp = tag_hypotheses(tag, m, dim);
    if (!hyp) {
      add(Inequality{"ball geometry required (dimension N)", 0, Relation::greater, 0});
      return;
    }
    for (auto& q : *hyp) add(q);
  };

  Grid grid = scenario_grid(sc);
  Field u0 = scenario_initial(sc, grid);
  const DiagnosticsRecord rec = compute_record(grid, m, u0, 0.0, sc.delta_diag);

  if (name == "turing-instability") {
    add({"p - r*gamma < 1", m.net_exponent(), Relation::less, 1.0});
    const EigenSystem sys = neumann_eigenpairs(grid, 2);
    add({"mu_2^2 < p - 1", sys.eigenvalues[1], Relation::less, m.p - 1.0});
  } else if (name == "ode-blowup") {
    add_tag("ode-blowup");
    add({"mean(u0) > 1", rec.u_mean, Relation::greater, 1.0});
  } else if (name == "variational-blowup") {
    add_tag("variational-blowup");
    add({"J(u0) <= 0", rec.J.value_or(NAN), Relation::less_equal, 0.0});
  } else if (name == "variational-global" || name == "small-rho-global" || name == "ddi-spiky") {
    add_tag(name);
  } else if (name == "region-blowup") {
    add_tag("region-blowup");
    add({"w(0) < zeta(0)^{1-gamma}", rec.w, Relation::less, std::pow(rec.zeta, 1.0 - m.gamma)});
  } else if (name == "region-global") {
    add_tag("region-global");
    add({"w(0) < zeta(0)^{1-gamma}", rec.w, Relation::less, std::pow(rec.zeta, 1.0 - m.gamma)}, false);
    add({"zeta(0)^{1+gamma} > z(0)", std::pow(rec.zeta, 1.0 + m.gamma), Relation::greater, rec.z}, false);
    pc.notes.push_back(
        "the two initial-data conditions imply w*z < zeta^2, which the moment inequality w*z >= zeta^2 rules out; "
        "they cannot hold together for any positive data");
  } else if (name == "rate-fit") {
    if (!dim)
      add({"ball geometry required (dimension N)", 0, Relation::greater, 0});
    else
      for (auto& q : rate_hypotheses(m, *dim)) add(q);
  } else if (name == "variational-boundary") {
    add({"|r - (p+1)| <= 1e-12", std::abs(m.r - (m.p + 1.0)), Relation::less_equal, kBoundaryTolerance});
    add({"|gamma - (p-1)/(p+1)| <= 1e-12", std::abs(m.gamma - (m.p - 1.0) / (m.p + 1.0)), Relation::less_equal,
         kBoundaryTolerance});
    add({"J(u0) < 0", rec.J.value_or(NAN), Relation::less, 0.0});
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return pc;
}

}  // namespace gmshadow
