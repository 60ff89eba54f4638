#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gmshadow/cli.hpp"
#include "gmshadow/config.hpp"
#include "gmshadow/error.hpp"
#include "gmshadow/integrator.hpp"
#include "gmshadow/toml_lite.hpp"
#include "json.hpp"

using namespace gmshadow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gmshadow");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_command(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "gmshadow_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& body) { std::ofstream(p) << body; }

}  // namespace

TEST_CASE("toml subset parsing") {
  auto j = parse_toml(R"(name = "demo" # comment
[params]
p = 3
q = 0.5
r = 1e0
s = 0.0
[geometry]
kind = "interval"
length = 1.0
[time]
snapshot_times = [
  0.0,
  0.5, # inline comment
]
snapshot_decades = false
[integrator]
overflow_guard = inf
tbl = { a = 1, b.c = "x" }
)");
  CHECK(j["name"] == "demo");
  CHECK(j["params"]["p"] == 3);
  CHECK(j["params"]["r"].get<double>() == 1.0);
  CHECK(j["time"]["snapshot_times"].size() == 2);
  CHECK(j["time"]["snapshot_decades"] == false);
  CHECK(std::isinf(j["integrator"]["overflow_guard"].get<double>()));
  CHECK(j["integrator"]["tbl"]["b"]["c"] == "x");

  try {
    parse_toml("a = 1\nb = [1, 2\nc = ", "f.toml");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("f.toml:", 0) == 0);
  }
  CHECK_THROWS_AS(parse_toml("a = 1\na = 2"), ConfigError);
  CHECK_THROWS_AS(parse_toml("a = \"open"), ConfigError);
}

TEST_CASE("load_config with a preset is fully defaulted") {
  auto p = scratch("minimal.toml");
  write_file(p, "name = \"mini\"\npreset = \"ode-blowup\"\n[params]\np = 3\nq = 1\nr = 1\ns = 0\n");
  auto sc = load_config(p.string());
  CHECK(sc.name == "mini");
  CHECK(sc.preset == "ode-blowup");
  CHECK(sc.points == 33);
  CHECK(sc.integrator.overflow_guard == 1e10);
  CHECK(sc.initial.kind == InitialKind::constant);
  CHECK(sc.initial.value == 2.0);
}

TEST_CASE("load_config validation errors") {
  auto bad_p = scratch("bad_p.toml");
  write_file(bad_p, "name = \"x\"\n[params]\np = 0.5\nq = 1\nr = 1\ns = 0\n");
  try {
    load_config(bad_p.string());
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("p must exceed 1") != std::string::npos);
  }

  auto spiky = scratch("spiky_interval.json");
  write_file(spiky, R"({"name": "x", "params": {"p": 4, "q": 3.5, "r": 1, "s": 0},
    "geometry": {"kind": "interval", "length": 1.0, "points": 4096},
    "initial": {"type": "spiky", "lambda": 0.05, "delta": 0.02}})");
  CHECK_THROWS_AS(load_config(spiky.string()), ConfigError);

  auto unknown = scratch("unknown.toml");
  write_file(unknown, "name = \"x\"\n[params]\np = 2\nq = 1\nr = 1\ns = 0\nextra = 1\n");
  try {
    load_config(unknown.string());
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("params.extra") != std::string::npos);
  }

  auto broken = scratch("broken.json");
  write_file(broken, "{\n \"name\": \"x\",\n \"params\": {\n}}}\n");
  CHECK_THROWS_AS(load_config(broken.string()), ConfigError);
  CHECK_THROWS_AS(load_config(scratch("does_not_exist.toml").string()), ConfigError);
}

TEST_CASE("config round trip") {
  for (const auto& info : preset_catalogue()) {
    if (info.name == "ddi-spiky" || info.name == "rate-fit") continue;
    auto sc = preset(info.name);
    auto back = config_from_json(config_to_json(sc));
    CHECK(config_to_json(back) == config_to_json(sc));
  }
}

TEST_CASE("every preset passes its hypothesis re-check") {
  for (const auto& info : preset_catalogue()) {
    CAPTURE(info.name);
    auto sc = preset(info.name);
    auto chk = check_preset(sc);
    CHECK(chk.enforced_ok());
    CHECK_FALSE(info.citation.empty());
  }
  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("preset examples") {
  auto ddi = preset("ddi-spiky");
  CHECK(ddi.params.p == 4.0);
  CHECK(ddi.params.gamma == 3.5);
  CHECK(ddi.points == 4096);
  CHECK(2.0 / 3.0 < ddi.params.rho_index);
  CHECK(ddi.params.rho_index < ddi.params.gamma);

  auto vb = preset("variational-blowup");
  CHECK(vb.params.r == vb.params.p + 1.0);
  CHECK(vb.params.gamma < std::min(1.0, (vb.params.p - 1) / (vb.params.p + 1)));
  Grid g = scenario_grid(vb);
  auto rec = compute_record(g, vb.params, scenario_initial(vb, g), 0.0);
  REQUIRE(rec.J);
  CHECK(*rec.J <= 0.0);

  auto tp = preset("turing-instability");
  CHECK(tp.params.net_exponent() == 0.0);
  CHECK(tp.geometry.length == doctest::Approx(2 * M_PI));
  auto chk = check_preset(tp);
  CHECK(chk.all_ok());
}

TEST_CASE("set_dotted") {
  json doc = {{"params", {{"p", 2}}}};
  set_dotted(doc, "params.q", 0.5);
  set_dotted(doc, "time.t_end", 3.0);
  CHECK(doc["params"]["q"] == 0.5);
  CHECK(doc["time"]["t_end"] == 3.0);
}

TEST_CASE("cli classify") {
  auto r = cli({"classify", "-p", "3", "-q", "1", "-r", "1", "-s", "0"});
  CHECK(r.code == kExitOk);
  auto j = json::parse(r.out);
  CHECK(j["anti_turing"] == true);
  auto d = cli({"classify", "-p", "4", "-q", "3.5", "-r", "1", "-s", "0", "--dim", "3"});
  CHECK(json::parse(d.out)["turing"] == true);
  CHECK(cli({"classify", "-p", "0.5", "-q", "1", "-r", "1", "-s", "0"}).code == kExitConfig);
}

TEST_CASE("cli errors") {
  CHECK(cli({"run", "--config", "missing.toml"}).code == kExitConfig);
  CHECK(cli({"run", "--preset", "nope"}).code == kExitConfig);
  CHECK(cli({"bogus"}).code == kExitConfig);
  CHECK(cli({}).code == kExitConfig);
}

TEST_CASE("cli presets and spectrum") {
  auto r = cli({"presets"});
  CHECK(r.code == kExitOk);
  for (const auto& info : preset_catalogue()) CHECK(r.out.find(info.name) != std::string::npos);
  auto s = cli({"spectrum", "--preset", "turing-instability", "-k", "4"});
  CHECK(s.code == kExitOk);
  auto j = json::parse(s.out);
  CHECK(j["unstable"] == true);
  CHECK(j["mu2_sq"].get<double>() == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("cli run writes the output layout") {
  auto root = scratch("run_out");
  fs::remove_all(root);
  auto r = cli({"run", "--preset", "ode-blowup", "--out", root.string()});
  CHECK(r.code == kExitOk);
  auto dir = root / "ode-blowup";
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(fs::exists(dir / "snapshots" / "t=0.csv"));
  std::ifstream is(dir / "summary.json");
  auto j = json::parse(is);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  CHECK(keys == std::vector<std::string>{"blowup_report", "params", "records_path", "regime", "scenario", "snapshots",
                                         "termination", "violations"});
  CHECK(j["blowup_report"]["detected"] == true);
  CHECK(j["termination"]["event"] == "blow-up-suspected");
  std::ifstream traj(dir / "trajectory.csv");
  std::string header;
  std::getline(traj, header);
  CHECK(header == "t,dt,u_mean,u_max,u_min,argmax_rho,zeta,z,w,J,I,u_neg_delta_avg,K_of_t");
}

TEST_CASE("cli run with a numerical failure exits 2") {
  auto cfg = scratch("fail.json");
  write_file(cfg, R"({"name": "fail", "params": {"p": 2, "q": 1, "r": 2, "s": 0},
    "geometry": {"kind": "interval", "length": 1.0, "points": 33},
    "initial": {"type": "perturbed", "value": 1.0, "eps": 0.5, "mode": 2},
    "integrator": {"dt_min": 1e-3, "step_tol": 1e-15, "steady_tol": 0},
    "time": {"t_end": 1.0}})");
  CHECK(cli({"run", "--config", cfg.string(), "--out", scratch("fail_out").string()}).code == kExitNumerical);
}

TEST_CASE("sweep results are independent of the job count") {
  auto cfg = scratch("sweep.toml");
  write_file(cfg, "name = \"sw\"\npreset = \"ode-blowup\"\n[time]\nt_end = 1.0\n");
  auto a = cli({"sweep", "--config", cfg.string(), "--vary", "initial.value=1.5:3:4", "--vary", "params.q=0.5:1:2",
                "--jobs", "1", "--out", scratch("sweep1").string()});
  auto b = cli({"sweep", "--config", cfg.string(), "--vary", "initial.value=1.5:3:4", "--vary", "params.q=0.5:1:2",
                "--jobs", "4", "--out", scratch("sweep4").string()});
  CHECK(a.code == kExitOk);
  CHECK(b.code == kExitOk);
  CHECK(a.out == b.out);
  auto j = json::parse(a.out);
  CHECK(j["runs"].size() == 8);
  CHECK(fs::exists(scratch("sweep4") / "sw__sweep.json"));
}
