#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gmshadow/config.hpp"
#include "gmshadow/diagnostics.hpp"
#include "gmshadow/initial_data.hpp"
#include "gmshadow/integrator.hpp"

using namespace gmshadow;

namespace {

std::vector<DiagnosticsRecord> synthetic_series(double T, double beta, double C) {
  std::vector<DiagnosticsRecord> recs;
  DiagnosticsRecord r0;
  r0.t = 0.0;
  r0.u_max = C * std::pow(T, -beta);
  recs.push_back(r0);
  for (int k = 0; k <= 80; ++k) {
    const double gap = std::pow(10.0, -4.0 - 4.0 * k / 80.0);
    DiagnosticsRecord r;
    r.t = T - gap;
    r.u_max = C * std::pow(gap, -beta);
    recs.push_back(r);
  }
  return recs;
}

}  // namespace

TEST_CASE("compute_record constant fields") {
  Grid g = build_grid(Geometry::interval(1.0), 33);
  auto prm = validate_params(3, 1, 1, 0);
  auto rec = compute_record(g, prm, constant_data(g, 2.0), 0.0);
  CHECK(rec.zeta == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rec.z == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(rec.w == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(rec.w * rec.z - rec.zeta * rec.zeta) <= 1e-12);
  CHECK(rec.u_max == 2.0);
  CHECK(rec.u_min == 2.0);
  CHECK_FALSE(rec.J);
  CHECK_FALSE(rec.I);
  CHECK(rec.ut_inf == doctest::Approx(2.0));

  auto vp = validate_params(3, 0.25, 4, 0);
  auto one = compute_record(g, vp, constant_data(g, 1.0), 0.0);
  REQUIRE(one.J);
  REQUIRE(one.I);
  CHECK(*one.J == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(std::abs(*one.I) <= 1e-14);
  CHECK(one.K == doctest::Approx(1.0));
  CHECK(one.ut_inf == 0.0);
}

TEST_CASE("compute_record Hoelder on nonconstant fields") {
  auto prm = validate_params(3, 0.5, 2, 0);
  Grid g = build_grid(Geometry::ball(3), 129);
  Field u = spiky_data(g, prm, SpikySpec::make(prm, 0.3, 0.1));
  auto rec = compute_record(g, prm, u, 0.0);
  CHECK(rec.w * rec.z >= rec.zeta * rec.zeta * (1 - 1e-10));
  CHECK(rec.argmax_rho == 0.0);
  CHECK(rec.u_max == u[0]);
  CHECK(rec.u_neg_delta_avg == doctest::Approx(average_power(g, u, -0.01)));
}

TEST_CASE("region_state examples") {
  auto prm = validate_params(3, 0.5, 1, 0);
  auto a = region_state(1.0, 0.5, prm);
  CHECK(a.in_region);
  CHECK(a.gamma1_residual == doctest::Approx(-0.5));
  auto b = region_state(1.0, 1.0, prm);
  CHECK_FALSE(b.in_region);
  CHECK(b.gamma1_residual == 0.0);
  CHECK(b.gamma2_residual == 0.0);
  auto c = region_state(4.0, 3.0, prm);
  CHECK_FALSE(c.in_region);
  CHECK(c.gamma1_residual == doctest::Approx(1.0));
  CHECK(c.gamma2_residual == doctest::Approx(3.0 - std::pow(4.0, 1.0 - prm.rho_index)));
}

TEST_CASE("fit_blowup on synthetic data") {
  auto prm = validate_params(3, 1, 1, 0);
  auto recs = synthetic_series(1.0, 0.5, 1.0);
  auto rep = fit_blowup(recs, prm);
  CHECK(rep.detected);
  CHECK(rep.classification == BlowUpClass::finite_time);
  CHECK(std::abs(rep.T_est - 1.0) < 1e-6);
  CHECK(std::abs(rep.beta_fit - 0.5) < 1e-6);
  CHECK(rep.C_fit == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(rep.fit_r2 > 0.999999);
  CHECK(rep.beta_theory == doctest::Approx(0.5));

  auto other = fit_blowup(synthetic_series(0.37, 1.0 / 3.0, 2.5), validate_params(4, 3.5, 1, 0));
  CHECK(std::abs(other.T_est - 0.37) < 1e-6);
  CHECK(std::abs(other.beta_fit - 1.0 / 3.0) < 1e-6);
}

TEST_CASE("fit_blowup rejects short or non-growing series") {
  auto prm = validate_params(3, 1, 1, 0);
  auto recs = synthetic_series(1.0, 0.5, 1.0);
  recs.resize(5);
  auto rep = fit_blowup(recs, prm);
  CHECK_FALSE(rep.detected);
  std::vector<DiagnosticsRecord> flat(40);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    flat[i].t = 0.1 * i;
    flat[i].u_max = 1.0;
    flat[i].K = 1.0;
  }
  auto none = fit_blowup(flat, prm);
  CHECK_FALSE(none.detected);
  CHECK(none.classification == BlowUpClass::none);
}

TEST_CASE("homogeneous blow-up: fit, bounds and whole-domain verdict") {
  ScenarioConfig sc = preset("ode-blowup");
  auto res = run(sc);
  REQUIRE(res.termination == Termination::blowup_suspected);
  auto rep = fit_blowup(res.records, sc.params);
  CHECK(rep.detected);
  // u ~ (T - t)^{-1/(p - r*gamma - 1)} for spatially constant data
  CHECK(rep.T_est == doctest::Approx(std::log(2.0)).epsilon(1e-4));
  CHECK(rep.beta_fit == doctest::Approx(1.0).epsilon(0.01));
  auto viol = check_monotone_bounds(res.records, sc.params);
  CHECK(viol.clean());
  CHECK(std::find(viol.checks_run.begin(), viol.checks_run.end(), "mass") != viol.checks_run.end());
  for (const auto& r : res.records) CHECK(std::abs(r.w * r.z - r.zeta * r.zeta) <= 1e-12 * r.zeta * r.zeta);
  auto sp = blowup_set_check(res.grid, res.snapshots, res.records);
  CHECK_FALSE(sp.far_bounded);
  CHECK_FALSE(sp.single_point);
  CHECK(sp.verdict == "whole-domain blow-up");
}

TEST_CASE("constant-1 run has no violations") {
  auto prm = validate_params(3, 0.25, 4, 0);
  Grid g = build_grid(Geometry::interval(1.0), 33);
  IntegratorConfig cfg;
  cfg.steady_tol = 0.0;
  RunOptions opt;
  opt.t_end = 2.0;
  auto res = run(g, prm, cfg, constant_data(g, 1.0), opt);
  CHECK(check_monotone_bounds(res.records, prm).clean());
  CHECK(check_region_invariance(res.records, prm).violations.size() <= res.records.size());
}

TEST_CASE("fd_tolerance and monotone sequences") {
  std::vector<DiagnosticsRecord> recs(20);
  std::vector<double> g(20);
  for (std::size_t i = 0; i < 20; ++i) {
    recs[i].t = 0.1 * i;
    recs[i].dt = 0.01;
    g[i] = std::exp(recs[i].t);
  }
  for (std::size_t k = 0; k + 1 < 20; ++k) CHECK(fd_tolerance(recs, g, k) > 0.0);
  CHECK(check_monotone_sequence("g", recs, g, true).empty());
  auto down = check_monotone_sequence("g", recs, g, false);
  CHECK(down.size() == 19);
  CHECK(down.front().check == "g");
}

TEST_CASE("blow-up set check on a radially decreasing bounded run") {
  ScenarioConfig sc = preset("variational-global");
  sc.time.t_end = 5.0;
  sc.time.snapshot_times = {0.0, 1.0, 2.0, 3.0, 4.0};
  auto res = run(sc);
  auto sp = blowup_set_check(res.grid, res.snapshots, res.records);
  CHECK(sp.argmax_fixed);
  REQUIRE(sp.moment_bound);
  CHECK(*sp.moment_bound);
}

TEST_CASE("profile_extract synthetics") {
  auto prm = validate_params(4, 3.5, 1, 0);
  Grid g = build_grid(Geometry::ball(3), 4096);
  std::vector<double> pw(g.size()), lg(g.size());
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double rho = g.nodes()[i];
    pw[i] = std::pow(rho, -2.0 / 3.0);
    lg[i] = std::pow(std::abs(std::log(rho)) / (rho * rho), 1.0 / 3.0);
  }
  pw[0] = pw[1];
  lg[0] = lg[1];
  auto a = profile_extract(g, pw, prm);
  CHECK(std::abs(a.slope - 2.0 / 3.0) < 1e-3);
  CHECK(a.predicted_slope == doctest::Approx(2.0 / 3.0));
  CHECK(a.predicted_exponent == doctest::Approx(1.0 / 3.0));
  CHECK(a.rho_lo == doctest::Approx(4.0 * g.spacing()).epsilon(0.3));
  CHECK(a.rho_hi <= 0.1);
  CHECK(a.rows.size() >= 5);
  auto b = profile_extract(g, lg, prm);
  CHECK(b.log_residual <= b.power_residual);
  CHECK(b.log_exponent == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

  Grid coarse = build_grid(Geometry::ball(3), 33);
  std::vector<double> c(33, 1.0);
  CHECK_THROWS(profile_extract(coarse, c, prm));
}
