#include "gmshadow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmshadow/error.hpp"

namespace gmshadow {

DiagnosticsRecord compute_record(const Grid& grid, const ModelParams& params, std::span<const double> u, double t,
                                 double delta_diag) {
  DiagnosticsRecord rec;
  rec.t = t;
  auto x = grid.nodes();
  std::size_t imax = 0;
  rec.u_min = u[0];
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (u[i] > u[imax]) imax = i;
    rec.u_min = std::min(rec.u_min, u[i]);
  }
  rec.u_max = u[imax];
  rec.argmax_rho = x[imax];
  rec.u_mean = average_power(grid, u, 1.0);
  rec.zeta = average_power(grid, u, params.r);
  rec.z = average_power(grid, u, params.p - 1.0 + params.r);
  rec.w = average_power(grid, u, params.r - params.p + 1.0);
  rec.u_neg_delta_avg = average_power(grid, u, -delta_diag);
  rec.K = std::exp((1.0 - params.p) * t - params.gamma * std::log(rec.zeta));
  if (params.variational() && params.gamma != 1.0) {
    const double grad = gradient_norm_sq(grid, u);
    const double l2 = average_power(grid, u, 2.0);
    const double q = std::pow(average_power(grid, u, params.p + 1.0), 1.0 - params.gamma);
    rec.J = 0.5 * (grad + l2) - q / ((params.p + 1.0) * (1.0 - params.gamma));
    rec.I = grad + l2 - q;
  }
  std::vector<double> ut(u.size());
  nonlocal_rhs(grid, params, u, ut);
  for (double v : ut) rec.ut_inf = std::max(rec.ut_inf, std::abs(v));
  rec.ut_sq = average_power(grid, ut, 2.0);
  return rec;
}

DiagnosticsRecord compute_record(const Grid& grid, const ModelParams& params, const Field& field, double t,
                                 double delta_diag) {
  field.check_grid(grid);
  return compute_record(grid, params, field.values(), t, delta_diag);
}

RegionState region_state(double zeta, double w, const ModelParams& params) {
  if (!(zeta > 0.0) || !(w > 0.0)) throw DomainError("region_state needs zeta, w > 0");
  RegionState s;
  s.gamma1_residual = w - std::pow(zeta, 1.0 - params.gamma);
  s.gamma2_residual = w - std::pow(zeta, 1.0 - params.rho_index);
  s.in_region = s.gamma1_residual < 0.0;
  return s;
}

std::size_t ViolationReport::count(const std::string& check) const {
  return std::size_t(std::count_if(violations.begin(), violations.end(),
                                   [&](const Violation& v) { return v.check == check; }));
}

double fd_tolerance(std::span<const DiagnosticsRecord> recs, std::span<const double> g, std::size_t k) {
  const std::size_t n = recs.size();
  auto quotient = [&](std::size_t j) { return (g[j + 1] - g[j]) / (recs[j + 1].t - recs[j].t); };
  const double dtk = recs[k + 1].t - recs[k].t;
  const double scale = std::max(std::abs(g[k]), std::abs(g[k + 1]));
  const double dq = quotient(k);
  double spacing = 0.0;
  if (k > 0) spacing = std::max(spacing, std::abs(dq - quotient(k - 1)));
  if (k + 2 < n) spacing = std::max(spacing, std::abs(quotient(k + 1) - dq));
  spacing *= 0.5;
  spacing += 4.0 * std::numeric_limits<double>::epsilon() * scale / dtk;
  const double step = std::max(recs[k].dt, recs[k + 1].dt);
  return 10.0 * std::max(step * step * scale, spacing);
}

std::vector<Violation> check_monotone_sequence(const std::string& name, std::span<const DiagnosticsRecord> recs,
                                               std::span<const double> g, bool increasing) {
  std::vector<Violation> out;
  for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
    const double dt = recs[k + 1].t - recs[k].t;
    if (!(dt > 0.0)) continue;
    const double d = (g[k + 1] - g[k]) / dt;
    const double tol = fd_tolerance(recs, g, k);
    const double signed_d = increasing ? d : -d;
    if (signed_d < -tol) out.push_back({name, k, d, increasing ? -tol : tol});
  }
  return out;
}

namespace {

std::vector<double> column(std::span<const DiagnosticsRecord> recs, double (*get)(const DiagnosticsRecord&)) {
  std::vector<double> v(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) v[i] = get(recs[i]);
  return v;
}

void append(ViolationReport& rep, std::vector<Violation> v) {
  rep.violations.insert(rep.violations.end(), v.begin(), v.end());
}

}  // namespace

ViolationReport check_monotone_bounds(std::span<const DiagnosticsRecord> recs, const ModelParams& params) {
  ViolationReport rep;
  if (recs.size() < 3) return rep;
  const double k_exp = params.net_exponent();

  if (params.p >= params.r) {
    rep.checks_run.push_back("mass");
    auto mean = column(recs, [](const DiagnosticsRecord& r) { return r.u_mean; });
    for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
      const double dt = recs[k + 1].t - recs[k].t;
      if (!(dt > 0.0)) continue;
      const double d = (mean[k + 1] - mean[k]) / dt;
      const double lo = std::min(-mean[k] + std::pow(mean[k], k_exp), -mean[k + 1] + std::pow(mean[k + 1], k_exp));
      const double tol = fd_tolerance(recs, mean, k);
      if (d < lo - tol) rep.violations.push_back({"mass", k, d, lo - tol});
    }
  }

  if (params.variational() && recs.front().J) {
    rep.checks_run.push_back("dissipation");
    auto j = column(recs, [](const DiagnosticsRecord& r) { return r.J.value_or(0.0); });
    append(rep, check_monotone_sequence("dissipation", recs, j, false));
  }

  rep.checks_run.push_back("neg-moment");
  {
    const std::size_t early = std::max<std::size_t>(1, recs.size() / 10);
    double bound = 0.0;
    for (std::size_t k = 0; k < early; ++k) bound = std::max(bound, recs[k].u_neg_delta_avg);
    for (std::size_t k = 0; k < recs.size(); ++k)
      if (recs[k].u_neg_delta_avg > (1.0 + 1e-3) * bound)
        rep.violations.push_back({"neg-moment", k, recs[k].u_neg_delta_avg, (1.0 + 1e-3) * bound});
  }

  rep.checks_run.push_back("scaled-mean");
  {
    std::vector<double> g(recs.size());
    for (std::size_t k = 0; k < recs.size(); ++k) g[k] = std::exp(recs[k].t) * recs[k].u_mean;
    append(rep, check_monotone_sequence("scaled-mean", recs, g, true));
  }

  rep.checks_run.push_back("holder");
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const double lhs = recs[k].w * recs[k].z, rhs = recs[k].zeta * recs[k].zeta * (1.0 - 1e-10);
    if (lhs < rhs) rep.violations.push_back({"holder", k, lhs, rhs});
  }
  return rep;
}

ViolationReport check_region_invariance(std::span<const DiagnosticsRecord> recs, const ModelParams& params) {
  ViolationReport rep;
  rep.checks_run = {"region", "zeta-increasing", "w-decreasing"};
  bool entered = false;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const RegionState s = region_state(recs[k].zeta, recs[k].w, params);
    if (s.in_region)
      entered = true;
    else if (entered)
      rep.violations.push_back({"region", k, s.gamma1_residual, 0.0});
  }
  auto zeta = column(recs, [](const DiagnosticsRecord& r) { return r.zeta; });
  auto w = column(recs, [](const DiagnosticsRecord& r) { return r.w; });
  append(rep, check_monotone_sequence("zeta-increasing", recs, zeta, true));
  append(rep, check_monotone_sequence("w-decreasing", recs, w, false));
  return rep;
}

std::string to_string(BlowUpClass c) {
  switch (c) {
    case BlowUpClass::finite_time: return "finite-time";
    case BlowUpClass::growth_no_fit: return "growth-no-fit";
    case BlowUpClass::none: return "none";
  }
  return "none";
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, ssr = 0.0, sst = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    f.ssr += e * e;
  }
  f.sst = syy;
  return f;
}

}  // namespace

BlowUpReport fit_blowup(std::span<const DiagnosticsRecord> recs, const ModelParams& params, const FitConfig& cfg) {
  BlowUpReport rep;
  rep.beta_theory = 1.0 / (params.p - 1.0);
  if (recs.empty()) {
    rep.notes.push_back("inconclusive: empty trajectory");
    return rep;
  }
  const double u0 = recs.front().u_max;
  double peak = 0.0;
  for (const auto& r : recs) peak = std::max(peak, r.u_max);
  const bool grew = peak >= cfg.lower_factor * u0;

  if (recs.size() > 1 && recs.front().K > 0.0 && recs.back().K < 1e-3 * recs.front().K)
    rep.notes.push_back("K(t) decays toward 0 along the run: type-II blow-up suspected");

  std::vector<double> t, y;
  for (const auto& r : recs)
    if (r.u_max >= cfg.lower_factor * u0 && r.u_max <= cfg.overflow_guard) {
      t.push_back(r.t);
      y.push_back(std::log(r.u_max));
    }
  rep.fit_records = t.size();
  if (t.size() < cfg.min_records) {
    rep.classification = grew ? BlowUpClass::growth_no_fit : BlowUpClass::none;
    rep.notes.push_back("inconclusive: fewer than " + std::to_string(cfg.min_records) + " records in the fit window");
    return rep;
  }
  const double ta = t.front(), tb = t.back();
  rep.fit_window = {ta, tb};
  const double span = tb - ta;

  std::vector<double> x(t.size());
  auto evaluate = [&](double s) {
    const double T = tb + std::exp(s);
    for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log(T - t[i]);
    return fit_line(x, y);
  };
  const double gap_min = std::max(8.0 * std::nextafter(tb, INFINITY) - 8.0 * tb, 1e-300);
  const double s_lo = std::log(gap_min), s_hi = std::log(10.0 * std::max(span, 1e-300));
  const int coarse = 400;
  double best_s = s_lo, best_ssr = INFINITY;
  int best_i = 0;
  for (int i = 0; i <= coarse; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / coarse;
    const double ssr = evaluate(s).ssr;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best_s = s;
      best_i = i;
    }
  }
  double a = s_lo + (s_hi - s_lo) * std::max(best_i - 1, 0) / coarse;
  double b = s_lo + (s_hi - s_lo) * std::min(best_i + 1, coarse) / coarse;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = evaluate(c).ssr, fd = evaluate(d).ssr;
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = evaluate(c).ssr;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = evaluate(d).ssr;
    }
  }
  double s_opt = 0.5 * (a + b);
  if (evaluate(s_opt).ssr > best_ssr) s_opt = best_s;
  const LineFit fit = evaluate(s_opt);
  rep.T_est = tb + std::exp(s_opt);
  rep.beta_fit = -fit.slope;
  rep.C_fit = std::exp(fit.intercept);
  rep.fit_r2 = fit.sst > 0.0 ? 1.0 - fit.ssr / fit.sst : 0.0;

  const bool in_cone = rep.T_est > tb && rep.T_est <= tb + span;
  rep.detected = rep.fit_r2 >= cfg.r2_threshold && in_cone && rep.beta_fit > 0.0;
  if (rep.detected)
    rep.classification = BlowUpClass::finite_time;
  else {
    rep.classification = grew ? BlowUpClass::growth_no_fit : BlowUpClass::none;
    if (!in_cone) rep.notes.push_back("fitted T lies outside the forward light-cone of the fit window");
    if (rep.fit_r2 < cfg.r2_threshold) rep.notes.push_back("power-law fit below the r2 threshold");
  }
  return rep;
}

namespace {

double interpolate(std::span<const double> x, std::span<const double> u, double at) {
  if (at <= x.front()) return u.front();
  if (at >= x.back()) return u.back();
  auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t i = std::size_t(it - x.begin());
  const double s = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - s) * u[i - 1] + s * u[i];
}

}  // namespace

SinglePointEvidence blowup_set_check(const Grid& grid, std::span<const Snapshot> snaps,
                                     std::span<const DiagnosticsRecord> recs) {
  if (snaps.size() < 2) throw DomainError("blowup_set_check needs at least two snapshots");
  if (recs.empty()) throw DomainError("blowup_set_check needs a trajectory");
  SinglePointEvidence ev;
  auto x = grid.nodes();
  const bool ball = grid.geometry().kind == GeometryKind::ball;
  const double len = grid.geometry().length;
  const double h = grid.spacing();

  const double x_star = ball ? 0.0 : recs.back().argmax_rho;
  const double t_half = 0.5 * recs.back().t;
  double drift = 0.0;
  for (const auto& r : recs)
    if (r.t >= t_half) drift = std::max(drift, std::abs(r.argmax_rho - x_star));
  ev.argmax_drift = drift;
  ev.argmax_fixed = ball ? drift == 0.0 : drift <= 2.0 * h;

  if (ball) {
    const int n = grid.geometry().dimension;
    auto w = grid.weights();
    double ratio = 0.0;
    for (const auto& s : snaps) {
      double mean = 0.0;
      for (std::size_t i = 0; i < s.values.size(); ++i) mean += w[i] * s.values[i];
      for (std::size_t i = 0; i < s.values.size(); ++i)
        ratio = std::max(ratio, std::pow(x[i], n) * s.values[i] / mean);
    }
    ev.moment_ratio = ratio;
    ev.moment_bound = ratio <= 1.0 + 1e-6;
  }

  ev.rho0 = ball ? 0.25 : (x_star + 0.25 * len <= len ? x_star + 0.25 * len : x_star - 0.25 * len);
  double far_lo = INFINITY, far_hi = 0.0;
  for (const auto& s : snaps) {
    const double v = interpolate(x, s.values, ev.rho0);
    far_lo = std::min(far_lo, v);
    far_hi = std::max(far_hi, v);
  }
  ev.far_ratio = far_hi / far_lo;
  ev.center_growth = interpolate(x, snaps.back().values, x_star) / interpolate(x, snaps.front().values, x_star);
  ev.far_bounded = ev.far_ratio < 10.0;

  const bool grew = ev.center_growth >= 1e3;
  ev.single_point = ev.argmax_fixed && ev.moment_bound.value_or(true) && ev.far_bounded && grew;
  if (ev.single_point)
    ev.verdict = "single-point blow-up";
  else if (grew && !ev.far_bounded)
    ev.verdict = "whole-domain blow-up";
  else if (!grew)
    ev.verdict = "no blow-up growth at the maximum";
  else
    ev.verdict = "inconclusive";
  return ev;
}

ProfileReport profile_extract(const Grid& grid, std::span<const double> u, const ModelParams& params, double rho_hi) {
  if (grid.geometry().kind != GeometryKind::ball) throw DomainError("profile_extract requires ball geometry");
  const double lo = 4.0 * grid.spacing();
  std::vector<double> lx, ly, lz;
  ProfileReport rep;
  rep.rho_lo = lo;
  rep.rho_hi = rho_hi;
  rep.predicted_slope = 2.0 / (params.p - 1.0);
  rep.predicted_exponent = 1.0 / (params.p - 1.0);
  auto x = grid.nodes();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (x[i] < lo || x[i] > rho_hi) continue;
    if (!(u[i] > 0.0)) throw DomainError("profile_extract needs a positive snapshot");
    lx.push_back(std::log(1.0 / x[i]));
    lz.push_back(std::log(std::abs(std::log(x[i])) / (x[i] * x[i])));
    ly.push_back(std::log(u[i]));
  }
  if (lx.size() < 5) throw DomainError("insufficient resolved range for profile extraction");
  const LineFit pf = fit_line(lx, ly);
  const LineFit lf = fit_line(lz, ly);
  rep.slope = pf.slope;
  rep.intercept = pf.intercept;
  rep.power_residual = std::sqrt(pf.ssr / double(lx.size()));
  rep.log_exponent = lf.slope;
  rep.log_intercept = lf.intercept;
  rep.log_residual = std::sqrt(lf.ssr / double(lx.size()));
  for (std::size_t i = 0; i < lx.size(); ++i) {
    ProfileRow row;
    row.rho = std::exp(-lx[i]);
    row.u = std::exp(ly[i]);
    row.power_fit = std::exp(pf.intercept + pf.slope * lx[i]);
    row.log_fit = std::exp(lf.intercept + lf.slope * lz[i]);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace gmshadow
