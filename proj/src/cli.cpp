#include "gmshadow/cli.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "gmshadow/config.hpp"
#include "gmshadow/error.hpp"
#include "gmshadow/integrator.hpp"
#include "gmshadow/report.hpp"
#include "gmshadow/spectral.hpp"

namespace gmshadow {

using nlohmann::json;

namespace {

json scenario_document(const std::string& config_path, const std::string& preset_name) {
  json doc = config_path.empty() ? json::object() : load_config_document(config_path);
  if (!preset_name.empty()) doc["preset"] = preset_name;
  if (doc.empty()) throw ConfigError("either --config or --preset is required");
  return doc;
}

struct VarySpec {
  std::string key;
  std::vector<double> values;
};

VarySpec parse_vary(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--vary expects key=lo:hi:n (got '" + text + "')");
  VarySpec v;
  v.key = text.substr(0, eq);
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError("--vary expects key=lo:hi:n (got '" + text + "')");
  double lo, hi;
  long n;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    n = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("--vary has a malformed range in '" + text + "'");
  }
  if (n < 1) throw ConfigError("--vary needs n >= 1");
  for (long i = 0; i < n; ++i) v.values.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1));
  return v;
}

bool integer_key(const std::string& key) {
  return key == "geometry.points" || key == "geometry.dimension" || key == "initial.mode";
}

json run_one(const ScenarioConfig& sc, const std::string& root, Termination& term) {
  RunResult res = run(sc);
  RunAnalysis a = analyze(sc, res);
  term = res.termination;
  return write_outputs(sc, res, a, root);
}

int cmd_run(const std::string& config, const std::string& preset_name, const std::string& out_dir, std::ostream& out,
            std::ostream& err) {
  ScenarioConfig sc = config_from_json(scenario_document(config, preset_name));
  const std::string root = resolve_output_root(out_dir, sc);
  Termination term;
  json summary = run_one(sc, root, term);
  out << "scenario " << sc.name << ": " << to_string(term) << " at t=" << summary["termination"]["t_final"].dump()
      << ", blow-up " << summary["blowup_report"]["classification"].get<std::string>()
      << (summary["blowup_report"]["detected"].get<bool>() ? " (detected)" : "") << "\n";
  out << "outputs: " << (std::filesystem::path(root) / sc.name).string() << "\n";
  if (term == Termination::numerical_failure) {
    err << "numerical failure: " << summary["termination"]["message"].get<std::string>() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_spectrum(const std::string& config, const std::string& preset_name, std::size_t k, std::ostream& out) {
  ScenarioConfig sc = config_from_json(scenario_document(config, preset_name));
  Grid grid = scenario_grid(sc);
  if (k < 2 || k > grid.size() / 4) throw ConfigError("-k must lie in [2, M/4]");
  EigenSystem sys = neumann_eigenpairs(grid, k);
  LinearSpectrum ls = linearized_spectrum(sc.params, grid, k);
  json rates = json::array();
  for (const auto& g : ls.modes)
    rates.push_back({{"mode", g.mode}, {"constant_mode", g.constant_mode}, {"mu_sq", g.mu_sq}, {"sigma", g.rate}});
  json j{{"scenario", sc.name},
         {"points", sc.points},
         {"eigenvalues", sys.eigenvalues},
         {"growth_rates", rates},
         {"mu2_sq", ls.mu2_sq},
         {"criterion_mu2_sq_below_p_minus_1", ls.criterion},
         {"unstable", ls.unstable_nonconstant}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config, const std::string& preset_name, const std::vector<std::string>& vary,
              unsigned jobs, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  json base = scenario_document(config, preset_name);
  ScenarioConfig base_sc = config_from_json(base);
  std::vector<VarySpec> specs;
  for (const auto& v : vary) specs.push_back(parse_vary(v));
  if (specs.empty()) throw ConfigError("sweep needs at least one --vary");

  std::vector<ScenarioConfig> variants;
  std::vector<std::size_t> idx(specs.size(), 0);
  while (true) {
    json doc = base;
    std::string name = base_sc.name;
    for (std::size_t s = 0; s < specs.size(); ++s) {
      double v = specs[s].values[idx[s]];
      json value = integer_key(specs[s].key) ? json(std::llround(v)) : json(v);
      set_dotted(doc, specs[s].key, value);
      name += "__" + specs[s].key + "=" + (value.is_number_integer() ? value.dump() : format_time(v));
    }
    doc["name"] = name;
    variants.push_back(config_from_json(doc));
    std::size_t s = 0;
    while (s < specs.size() && ++idx[s] == specs[s].values.size()) idx[s++] = 0;
    if (s == specs.size()) break;
  }

  const std::string root = resolve_output_root(out_dir, base_sc);
  std::vector<json> summaries(variants.size());
  std::vector<Termination> terms(variants.size(), Termination::horizon_reached);
  std::vector<std::string> errors(variants.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < variants.size(); i = next++) {
      try {
        summaries[i] = run_one(variants[i], root, terms[i]);
      } catch (const std::exception& e) {
        terms[i] = Termination::numerical_failure;
        errors[i] = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, unsigned(variants.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json runs = json::array();
  int code = kExitOk;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    json entry{{"scenario", variants[i].name}, {"termination", to_string(terms[i])}};
    if (!errors[i].empty()) entry["error"] = errors[i];
    if (!summaries[i].is_null()) entry["blowup_report"] = summaries[i]["blowup_report"];
    runs.push_back(entry);
    if (terms[i] == Termination::numerical_failure) {
      code = kExitNumerical;
      err << variants[i].name << ": numerical failure " << errors[i] << "\n";
    }
  }
  json sweep{{"base", base_sc.name}, {"runs", runs}};
  std::filesystem::create_directories(root);
  std::ofstream os(std::filesystem::path(root) / (base_sc.name + "__sweep.json"));
  os << sweep.dump(2) << "\n";
  out << sweep.dump(2) << "\n";
  return code;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"gmshadow: non-local shadow Gierer-Meinhardt laboratory"};
  app.require_subcommand(1);

  std::string config, preset_name, out_dir;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write trajectory, snapshots and summary");
  run_cmd->add_option("--config", config, "scenario file (TOML or JSON)");
  run_cmd->add_option("--preset", preset_name, "preset name");
  run_cmd->add_option("--out", out_dir, "output root");

  double p = 0, q = 0, r = 0, s = 0;
  int dim = 0;
  auto* classify = app.add_subcommand("classify", "print the regime report as JSON");
  classify->add_option("-p", p)->required();
  classify->add_option("-q", q)->required();
  classify->add_option("-r", r)->required();
  classify->add_option("-s", s)->required();
  classify->add_option("--dim", dim, "spatial dimension N");

  std::size_t k = 6;
  auto* spectrum = app.add_subcommand("spectrum", "print Neumann eigenvalues and growth rates as JSON");
  spectrum->add_option("--config", config, "scenario file");
  spectrum->add_option("--preset", preset_name, "preset name");
  spectrum->add_option("-k", k, "number of eigenpairs");

  std::vector<std::string> vary;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "cartesian parameter sweep");
  sweep->add_option("--config", config, "scenario file");
  sweep->add_option("--preset", preset_name, "preset name");
  sweep->add_option("--vary", vary, "key=lo:hi:n (repeatable)");
  sweep->add_option("--jobs", jobs, "concurrent runs");
  sweep->add_option("--out", out_dir, "output root");

  auto* presets = app.add_subcommand("presets", "list presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config, preset_name, out_dir, out, err);
    if (classify->parsed()) {
      HypothesisContext ctx;
      if (dim > 0) ctx.dimension = dim;
      ModelParams m = validate_params(p, q, r, s);
      json j = regime_json(classify_regime(m, ctx));
      j["params"] = {{"p", m.p}, {"q", m.q}, {"r", m.r}, {"s", m.s}, {"gamma", m.gamma}, {"rho_index", m.rho_index}};
      out << j.dump(2) << "\n";
      return kExitOk;
    }
    if (spectrum->parsed()) return cmd_spectrum(config, preset_name, k, out);
    if (sweep->parsed()) return cmd_sweep(config, preset_name, vary, jobs, out_dir, out, err);
    if (presets->parsed()) {
      json arr = json::array();
      for (const auto& pi : preset_catalogue()) arr.push_back({{"name", pi.name}, {"hypotheses", pi.citation}});
      out << arr.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace gmshadow
