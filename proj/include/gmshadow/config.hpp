#pragma once

#include <string>
#include <vector>

#include "gmshadow/model.hpp"
#include "gmshadow/scenario.hpp"
#include "json.hpp"

namespace gmshadow {

/// Reads a TOML (by extension .toml) or JSON file, merges it over its preset and validates.
ScenarioConfig load_config(const std::string& path);

/// Parses a config file into its raw document (relative initial.path resolved against the file).
nlohmann::json load_config_document(const std::string& path);

/// Parses config text; format is "toml" or "json".
nlohmann::json parse_config_text(const std::string& text, const std::string& format, const std::string& source);

/// Deep-merges over the preset named in the document (if any) and validates every field.
ScenarioConfig config_from_json(const nlohmann::json& doc);

/// Full JSON form of a configuration (round-trips through config_from_json).
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Preset document as JSON (the basis of preset()).
nlohmann::json preset_json(const std::string& name);
ScenarioConfig preset(const std::string& name);

struct PresetInfo {
  std::string name;
  std::string citation;
};
const std::vector<PresetInfo>& preset_catalogue();

struct HypothesisCheck {
  Inequality inequality;
  bool enforced = true;  // a failing enforced check is a configuration error
};

struct PresetCheck {
  std::string preset;
  std::vector<HypothesisCheck> checks;
  std::vector<std::string> notes;

  bool enforced_ok() const;
  bool all_ok() const;
};

/// Re-evaluates the hypotheses a preset claims on the concrete parameters, grid and data.
PresetCheck check_preset(const ScenarioConfig& config);

/// Sets a dotted key (e.g. "params.p") in a config document.
void set_dotted(nlohmann::json& doc, const std::string& key, const nlohmann::json& value);

}  // namespace gmshadow
