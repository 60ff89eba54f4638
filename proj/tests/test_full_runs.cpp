#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gmshadow/cli.hpp"
#include "gmshadow/config.hpp"
#include "gmshadow/integrator.hpp"
#include "gmshadow/report.hpp"
#include "json.hpp"

using namespace gmshadow;
using nlohmann::json;
namespace fs = std::filesystem;

TEST_CASE("run --preset ddi-spiky") {
  auto root = fs::temp_directory_path() / "gmshadow_full_runs";
  fs::remove_all(root);
  std::vector<std::string> args{"gmshadow", "run", "--preset", "ddi-spiky", "--out", root.string()};
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  REQUIRE(run_command(int(argv.size()), argv.data(), out, err) == kExitOk);

  std::ifstream is(root / "ddi-spiky" / "summary.json");
  auto j = json::parse(is);
  const auto& b = j["blowup_report"];
  CHECK(j["termination"]["event"] == "blow-up-suspected");
  CHECK(b["detected"] == true);
  CHECK(b["single_point"] == true);
  CHECK(b["argmax_drift"].get<double>() == 0.0);
  CHECK(b["beta_fit"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(0.15));
  CHECK(j["violations"].empty());

  // power-law profile slope over rho in [4h, 0.1]
  const double slope = b["profile_slope"].get<double>();
  CAPTURE(slope);
  CHECK(slope >= 2.0 / 3.0 - 0.15);
  CHECK(slope <= 2.0 / 3.0 + 0.15);
}

TEST_CASE("rate-fit preset") {
  ScenarioConfig sc = preset("rate-fit");
  auto res = run(sc);
  auto an = analyze(sc, res);
  CHECK(an.blowup.detected);
  CHECK(an.blowup.fit_r2 >= 0.99);
  CHECK(an.blowup.beta_fit == doctest::Approx(1.0 / 3.0).epsilon(0.15));
  CHECK(an.violations.clean());
}

TEST_CASE("radially decreasing bounded run: blow-up set checks pass") {
  ScenarioConfig sc = preset("region-global");
  sc.time.snapshot_times = {0.0, 10.0, 20.0, 30.0, 40.0};
  auto res = run(sc);
  CHECK(res.termination == Termination::horizon_reached);
  auto sp = blowup_set_check(res.grid, res.snapshots, res.records);
  CHECK(sp.argmax_fixed);
  CHECK_FALSE(sp.moment_bound);
  CHECK_FALSE(sp.single_point);
}

TEST_CASE("variational-boundary preset grows without a finite-time fit") {
  ScenarioConfig sc = preset("variational-boundary");
  auto res = run(sc);
  auto an = analyze(sc, res);
  MESSAGE("termination ", to_string(res.termination), ", classification ", to_string(an.blowup.classification),
          ", u_max ", res.records.back().u_max);
  CHECK(res.records.back().u_max > res.records.front().u_max);
}
