#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gmshadow/grid.hpp"
#include "gmshadow/model.hpp"

namespace gmshadow {

enum class Scheme { explicit_rk, imex_cn };

std::string to_string(Scheme s);

struct IntegratorConfig {
  Scheme scheme = Scheme::explicit_rk;
  double cfl_safety = 0.4;
  double reaction_safety = 0.1;
  double dt_min = 1e-14;
  double dt_max = 1.0;
  double overflow_guard = 1e10;
  double steady_tol = 1e-9;  // 0 disables the steady-state event
  double step_tol = 1e-8;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

enum class InitialKind { constant, perturbed, spiky, file };

struct InitialSpec {
  InitialKind kind = InitialKind::constant;
  double value = 1.0;  // constant / perturbed base level
  double eps = 0.0;
  std::size_t mode = 2;
  double lambda = 1.0;
  double delta = 0.1;
  std::string path;
};

struct TimeConfig {
  double t_end = 10.0;
  double record_cadence = 0.1;  // 0: record every accepted step
  std::vector<double> snapshot_times{0.0};
  bool snapshot_decades = true;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::optional<std::string> preset;
  ModelParams params = validate_params(2.0, 1.0, 1.0, 0.0);
  Geometry geometry = Geometry::interval(1.0);
  std::size_t points = 101;
  InitialSpec initial;
  IntegratorConfig integrator;
  TimeConfig time;
  double delta_diag = 0.01;
  std::string output_dir;
};

}  // namespace gmshadow
