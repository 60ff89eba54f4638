#include "gmshadow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dopri.hpp"
#include "gmshadow/error.hpp"
#include "gmshadow/initial_data.hpp"
#include "powers.hpp"

namespace gmshadow {

namespace {

/// dt fell below dt_min; run() decides between blow-up and failure.
class StepUnderflow : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Stage value left the positive cone; the step is retried with a smaller dt.
struct Rejected {};

void require_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericalFailure("non-finite value during a time step");
}

void require_positive(std::span<const double> v) {
  for (double x : v)
    if (!(x > kPositivityGuard)) throw Rejected{};
}

double sup_norm(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

class Stepper {
 public:
  Stepper(const Grid& grid, const ModelParams& params, const IntegratorConfig& cfg)
      : grid_(grid), params_(params), cfg_(cfg), m_(grid.size()) {}

  // Returns scaled error estimate; writes the candidate state into out.
  double attempt(std::span<const double> u, double dt, std::vector<double>& out) {
    return cfg_.scheme == Scheme::explicit_rk ? attempt_dopri(u, dt, out) : attempt_imex(u, dt, out);
  }

  double controller_exponent() const { return cfg_.scheme == Scheme::explicit_rk ? 0.2 : 1.0 / 3.0; }

 private:
  void rhs(std::span<const double> u, std::vector<double>& out) {
    require_finite(u);
    require_positive(u);
    out.resize(m_);
    nonlocal_rhs(grid_, params_, u, out);
  }

  double scaled_error(std::span<const double> u, std::span<const double> un, std::span<const double> e) const {
    const double tol = cfg_.step_tol;
    double err = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double sc = tol + tol * std::max(std::abs(u[i]), std::abs(un[i]));
      err = std::max(err, std::abs(e[i]) / sc);
    }
    return err;
  }

  double attempt_dopri(std::span<const double> u, double h, std::vector<double>& out) {
    using namespace detail;
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_}) k->resize(m_);
    rhs(u, k1_);
    for (std::size_t i = 0; i < m_; ++i) tmp_[i] = u[i] + h * kA21 * k1_[i];
    rhs(tmp_, k2_);
    for (std::size_t i = 0; i < m_; ++i) tmp_[i] = u[i] + h * (kA31 * k1_[i] + kA32 * k2_[i]);
    rhs(tmp_, k3_);
    for (std::size_t i = 0; i < m_; ++i) tmp_[i] = u[i] + h * (kA41 * k1_[i] + kA42 * k2_[i] + kA43 * k3_[i]);
    rhs(tmp_, k4_);
    for (std::size_t i = 0; i < m_; ++i)
      tmp_[i] = u[i] + h * (kA51 * k1_[i] + kA52 * k2_[i] + kA53 * k3_[i] + kA54 * k4_[i]);
    rhs(tmp_, k5_);
    for (std::size_t i = 0; i < m_; ++i)
      tmp_[i] = u[i] + h * (kA61 * k1_[i] + kA62 * k2_[i] + kA63 * k3_[i] + kA64 * k4_[i] + kA65 * k5_[i]);
    rhs(tmp_, k6_);
    out.resize(m_);
    for (std::size_t i = 0; i < m_; ++i)
      out[i] = u[i] + h * (kB1 * k1_[i] + kB3 * k3_[i] + kB4 * k4_[i] + kB5 * k5_[i] + kB6 * k6_[i]);
    rhs(out, k7_);
    for (std::size_t i = 0; i < m_; ++i)
      tmp_[i] = h * (kE1 * k1_[i] + kE3 * k3_[i] + kE4 * k4_[i] + kE5 * k5_[i] + kE6 * k6_[i] + kE7 * k7_[i]);
    return scaled_error(u, out, tmp_);
  }

  // Reaction part u^p / zeta^gamma with the average evaluated on this stage.
  void reaction(std::span<const double> u, std::vector<double>& out) {
    require_finite(u);
    require_positive(u);
    out.resize(m_);
    const double inv = 1.0 / detail::fast_pow(average_power(grid_, u, params_.r), params_.gamma);
    for (std::size_t i = 0; i < m_; ++i) out[i] = detail::fast_pow(u[i], params_.p) * inv;
  }

  // y = A u with A = L - I
  void linear(std::span<const double> u, std::vector<double>& y) {
    y.resize(m_);
    laplacian_apply(grid_, u, y);
    for (std::size_t i = 0; i < m_; ++i) y[i] -= u[i];
  }

  // Solves (I - c A) x = b in place (Thomas algorithm, diagonally dominant).
  void implicit_solve(double c, std::vector<double>& b) {
    auto up = grid_.upper();
    auto lo = grid_.lower();
    cp_.resize(m_);
    double diag = 1.0 + c + c * (up[0] + lo[0]);
    cp_[0] = -c * up[0] / diag;
    b[0] /= diag;
    for (std::size_t i = 1; i < m_; ++i) {
      const double sub = -c * lo[i];
      const double sup = -c * up[i];
      diag = 1.0 + c + c * (up[i] + lo[i]) - sub * cp_[i - 1];
      cp_[i] = sup / diag;
      b[i] = (b[i] - sub * b[i - 1]) / diag;
    }
    for (std::size_t i = m_ - 1; i-- > 0;) b[i] -= cp_[i] * b[i + 1];
  }

  // Crank-Nicolson in increment form: (I - dt/2 A) d = dt (A u + R).
  void cn_heun(std::span<const double> u, double dt, std::vector<double>& out) {
    reaction(u, r0_);
    linear(u, base_);
    star_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) star_[i] = dt * (base_[i] + r0_[i]);
    implicit_solve(0.5 * dt, star_);
    for (std::size_t i = 0; i < m_; ++i) star_[i] += u[i];
    reaction(star_, r1_);
    out.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) out[i] = dt * (base_[i] + 0.5 * (r0_[i] + r1_[i]));
    implicit_solve(0.5 * dt, out);
    for (std::size_t i = 0; i < m_; ++i) out[i] += u[i];
    require_finite(out);
    require_positive(out);
  }

  double attempt_imex(std::span<const double> u, double dt, std::vector<double>& out) {
    cn_heun(u, dt, full_);
    cn_heun(u, 0.5 * dt, half_);
    cn_heun(half_, 0.5 * dt, out);
    tmp_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) tmp_[i] = (out[i] - full_[i]) / 3.0;
    return scaled_error(u, out, tmp_);
  }

  const Grid& grid_;
  const ModelParams& params_;
  const IntegratorConfig& cfg_;
  std::size_t m_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_;
  std::vector<double> r0_, r1_, base_, star_, cp_, full_, half_;
};

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::explicit_rk ? "explicit-rk" : "imex-cn"; }

void IntegratorConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("integrator.") + name + " must be positive");
  };
  positive(cfl_safety, "cfl_safety");
  if (cfl_safety > 0.9) throw ConfigError("integrator.cfl_safety must not exceed 0.9");
  positive(reaction_safety, "reaction_safety");
  positive(dt_min, "dt_min");
  positive(dt_max, "dt_max");
  if (dt_min > dt_max) throw ConfigError("integrator.dt_min must not exceed integrator.dt_max");
  positive(overflow_guard, "overflow_guard");
  positive(step_tol, "step_tol");
  if (!(steady_tol >= 0.0) || !std::isfinite(steady_tol))
    throw ConfigError("integrator.steady_tol must be nonnegative (0 disables the steady-state event)");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::horizon_reached: return "horizon-reached";
    case Termination::blowup_suspected: return "blow-up-suspected";
    case Termination::steady_state: return "steady-state";
    case Termination::numerical_failure: return "numerical-failure";
  }
  return "numerical-failure";
}

double reaction_dt_bound(std::span<const double> u, const Grid& grid, const ModelParams& params,
                         const IntegratorConfig& cfg) {
  const double umax = sup_norm(u);
  const double zeta = average_power(grid, u, params.r);
  return cfg.reaction_safety * std::pow(umax, 1.0 - params.p) * std::pow(zeta, params.gamma);
}

double propose_dt(const SimState& state, const Grid& grid, const ModelParams& params, const IntegratorConfig& cfg) {
  state.field.check_grid(grid);
  double dt = cfg.dt_max;
  if (cfg.scheme == Scheme::explicit_rk) {
    const double h = grid.spacing();
    dt = std::min(dt, cfg.cfl_safety * h * h / (2.0 * grid.stencil_dimension()));
  }
  return std::min(dt, reaction_dt_bound(state.field.values(), grid, params, cfg));
}

SimState step(const SimState& state, const Grid& grid, const ModelParams& params, const IntegratorConfig& cfg,
              double dt_cap) {
  double dt = propose_dt(state, grid, params, cfg);
  if (state.dt_next > 0.0) dt = std::min(dt, state.dt_next);
  const double proposed = dt;
  const bool capped = dt_cap < dt;
  if (capped) dt = dt_cap;
  if (!capped && dt < cfg.dt_min) throw StepUnderflow("time step below dt_min");

  Stepper stepper(grid, params, cfg);
  std::vector<double> out;
  auto u = state.field.values();
  for (int attempt = 0; attempt <= 40; ++attempt) {
    double err;
    try {
      err = stepper.attempt(u, dt, out);
    } catch (const Rejected&) {
      err = INFINITY;
    }
    if (err <= 1.0) {
      SimState next;
      next.field = Field(grid, std::move(out));
      next.dt = dt;
      next.step_index = state.step_index + 1;
      const double y = dt - state.t_carry;
      const double t = state.t + y;
      next.t_carry = (t - state.t) - y;
      next.t = t;
      const double fac = err > 0.0 ? 0.9 * std::pow(err, -stepper.controller_exponent()) : 5.0;
      next.dt_next = dt * std::clamp(fac, 0.2, 5.0);
      // a landing step says nothing about the admissible size
      if (capped && attempt == 0) next.dt_next = std::max(next.dt_next, proposed);
      return next;
    }
    dt *= 0.5;
    if (dt < cfg.dt_min) throw StepUnderflow("time step below dt_min after rejection");
  }
  throw NumericalFailure("step rejected after 40 halvings");
}

RunResult run(const Grid& grid, const ModelParams& params, const IntegratorConfig& cfg, const Field& u0,
              const RunOptions& opt) {
  cfg.validate();
  u0.check_grid(grid);
  RunResult res;
  res.grid = grid;
  res.initial = u0;

  SimState state;
  state.field = u0;
  DiagnosticsRecord rec = compute_record(grid, params, u0.values(), 0.0, opt.delta_diag);
  res.records.push_back(rec);
  const double umax0 = rec.u_max;
  double last_recorded_max = umax0;

  std::vector<double> snap_times;
  for (double s : opt.snapshot_times)
    if (s > 0.0 && s < opt.t_end) snap_times.push_back(s);
  std::sort(snap_times.begin(), snap_times.end());
  snap_times.erase(std::unique(snap_times.begin(), snap_times.end()), snap_times.end());
  std::size_t next_snap = 0;
  const bool snap_initial =
      std::find(opt.snapshot_times.begin(), opt.snapshot_times.end(), 0.0) != opt.snapshot_times.end() ||
      opt.snapshot_decades;
  if (snap_initial) res.snapshots.push_back({0.0, u0.data()});
  double next_decade = 10.0 * umax0;

  const double cadence = opt.record_cadence;
  // targets closer than this to the current time count as reached
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, opt.t_end);
  std::size_t record_k = 1;
  double next_record = cadence > 0.0 ? cadence : INFINITY;
  double prev_max = umax0;
  std::vector<double> ut;

  auto finish = [&](Termination term, std::string msg) {
    res.termination = term;
    res.message = std::move(msg);
  };

  while (true) {
    if (state.t >= opt.t_end) {
      finish(Termination::horizon_reached, "reached t_end");
      break;
    }
    double target = opt.t_end;
    if (next_record < target) target = next_record;
    if (next_snap < snap_times.size() && snap_times[next_snap] < target) target = snap_times[next_snap];
    const double cap = target - state.t;

    SimState next;
    try {
      next = step(state, grid, params, cfg, cap);
    } catch (const StepUnderflow& e) {
      const double umax = sup_norm(state.field.values());
      if (umax >= 100.0 * umax0 && umax > prev_max * (1.0 - 1e-15))
        finish(Termination::blowup_suspected, "step size fell below dt_min while the solution grows");
      else
        finish(Termination::numerical_failure, e.what());
      break;
    } catch (const NumericalFailure& e) {
      finish(Termination::numerical_failure, e.what());
      break;
    }
    const bool landed = next.dt == cap;
    if (landed) {
      next.t = target;
      next.t_carry = 0.0;
    }
    prev_max = sup_norm(state.field.values());
    state = std::move(next);
    res.steps = state.step_index;

    const auto u = state.field.values();
    const double umax = sup_norm(u);
    bool want_record = cadence == 0.0 || umax > 1.05 * last_recorded_max;
    if (next_record <= state.t + slack) {
      want_record = true;
      while (next_record <= state.t + slack) next_record = cadence * double(++record_k);
    }
    bool want_snapshot = false;
    while (next_snap < snap_times.size() && snap_times[next_snap] <= state.t + slack) {
      want_snapshot = true;
      ++next_snap;
    }
    if (opt.snapshot_decades && umax >= next_decade) {
      want_snapshot = true;
      while (next_decade <= umax) next_decade *= 10.0;
    }

    std::optional<Termination> event;
    if (umax >= cfg.overflow_guard) event = Termination::blowup_suspected;

    if (!event && cfg.steady_tol > 0.0) {
      ut.resize(u.size());
      nonlocal_rhs(grid, params, u, ut);
      if (sup_norm(ut) <= cfg.steady_tol) event = Termination::steady_state;
    }
    if (want_record || event) {
      rec = compute_record(grid, params, u, state.t, opt.delta_diag);
      rec.dt = state.dt;
      rec.step_index = state.step_index;
      res.records.push_back(rec);
      last_recorded_max = rec.u_max;
    }
    if (want_snapshot) res.snapshots.push_back({state.t, state.field.data()});
    if (event) {
      finish(*event, *event == Termination::steady_state ? "sup norm of u_t below steady_tol"
                                                          : "sup norm reached the overflow guard");
      break;
    }
  }

  if (res.records.back().t != state.t) {
    rec = compute_record(grid, params, state.field.values(), state.t, opt.delta_diag);
    rec.dt = state.dt;
    rec.step_index = state.step_index;
    res.records.push_back(rec);
  }
  if (res.snapshots.empty() || res.snapshots.back().t != state.t) res.snapshots.push_back({state.t, state.field.data()});
  res.t_final = state.t;
  res.final_field = state.field;
  return res;
}

Grid scenario_grid(const ScenarioConfig& sc) { return build_grid(sc.geometry, sc.points); }

Field scenario_initial(const ScenarioConfig& sc, const Grid& grid) {
  const InitialSpec& in = sc.initial;
  switch (in.kind) {
    case InitialKind::constant: return constant_data(grid, in.value);
    case InitialKind::perturbed: return perturbed_constant(grid, in.value, in.eps, in.mode);
    case InitialKind::spiky: return spiky_data(grid, sc.params, SpikySpec::make(sc.params, in.lambda, in.delta));
    case InitialKind::file: {
      Field f = read_snapshot_csv(in.path, grid);
      for (double v : f.values())
        if (!(v > 0.0)) throw ConfigError("initial data file " + in.path + " contains nonpositive values");
      return f;
    }
  }
  throw ConfigError("unknown initial data kind");
}

RunResult run(const ScenarioConfig& sc) {
  Grid grid = scenario_grid(sc);
  Field u0 = scenario_initial(sc, grid);
  RunOptions opt;
  opt.t_end = sc.time.t_end;
  opt.record_cadence = sc.time.record_cadence;
  opt.snapshot_times = sc.time.snapshot_times;
  opt.snapshot_decades = sc.time.snapshot_decades;
  opt.delta_diag = sc.delta_diag;
  return run(grid, sc.params, sc.integrator, u0, opt);
}

}  // namespace gmshadow
