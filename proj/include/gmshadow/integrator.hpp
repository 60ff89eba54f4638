#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gmshadow/diagnostics.hpp"
#include "gmshadow/grid.hpp"
#include "gmshadow/model.hpp"
#include "gmshadow/scenario.hpp"

namespace gmshadow {

struct SimState {
  double t = 0.0;
  double dt = 0.0;       // last accepted step (0 before the first step)
  double dt_next = 0.0;  // controller suggestion for the next step (0: use propose_dt)
  Field field;
  std::size_t step_index = 0;
  double t_carry = 0.0;  // compensated-summation remainder of t
};

double reaction_dt_bound(std::span<const double> u, const Grid& grid, const ModelParams& params,
                         const IntegratorConfig& config);

double propose_dt(const SimState& state, const Grid& grid, const ModelParams& params, const IntegratorConfig& config);

/// One accepted step, at most `dt_cap` long; retries with halved dt until the error test passes.
SimState step(const SimState& state, const Grid& grid, const ModelParams& params, const IntegratorConfig& config,
              double dt_cap = INFINITY);

enum class Termination { horizon_reached, blowup_suspected, steady_state, numerical_failure };

std::string to_string(Termination t);

struct RunResult {
  Grid grid;
  Termination termination = Termination::horizon_reached;
  std::string message;
  double t_final = 0.0;
  std::size_t steps = 0;
  std::vector<DiagnosticsRecord> records;
  std::vector<Snapshot> snapshots;
  Field initial;
  Field final_field;
};

struct RunOptions {
  double t_end = 10.0;
  double record_cadence = 0.1;
  std::vector<double> snapshot_times{0.0};
  bool snapshot_decades = true;
  double delta_diag = kDefaultDeltaDiag;
};

RunResult run(const Grid& grid, const ModelParams& params, const IntegratorConfig& config, const Field& u0,
              const RunOptions& options);

/// Builds the grid and initial field of the scenario and runs it.
RunResult run(const ScenarioConfig& scenario);

/// Grid and initial data of a scenario (shared with the CLI and presets).
Grid scenario_grid(const ScenarioConfig& scenario);
Field scenario_initial(const ScenarioConfig& scenario, const Grid& grid);

}  // namespace gmshadow
