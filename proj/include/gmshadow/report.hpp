#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gmshadow/config.hpp"
#include "gmshadow/diagnostics.hpp"
#include "gmshadow/integrator.hpp"
#include "json.hpp"

namespace gmshadow {

/// Post-run inference attached to a RunResult.
struct RunAnalysis {
  BlowUpReport blowup;
  ViolationReport violations;
  std::optional<ViolationReport> region;
  std::optional<SinglePointEvidence> single_point;
  std::optional<ProfileReport> profile;
  PresetCheck preset_check;
};

RunAnalysis analyze(const ScenarioConfig& config, const RunResult& result);

void write_trajectory_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

/// Shortest round-trip decimal form, used in snapshot file names.
std::string format_time(double t);

nlohmann::json regime_json(const RegimeReport& report);
nlohmann::json blowup_json(const BlowUpReport& report, const RunAnalysis& analysis);

/// Writes trajectory.csv, snapshots/t=<v>.csv and summary.json under <root>/<name>; returns the summary.
nlohmann::json write_outputs(const ScenarioConfig& config, const RunResult& result, const RunAnalysis& analysis,
                             const std::string& root);

/// --out, then config output_dir, then $GMSHADOW_OUT, then "gmshadow-out".
std::string resolve_output_root(const std::string& cli_out, const ScenarioConfig& config);

}  // namespace gmshadow
