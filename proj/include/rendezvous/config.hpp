// Scenario loading: TOML-style config files, named presets and the
// canonical serialization used for the run-manifest config hash.

#ifndef RENDEZVOUS_CONFIG_HPP
#define RENDEZVOUS_CONFIG_HPP

#include "rendezvous/sim.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace rendezvous {

// Parses and validates a scenario file. Unknown keys are rejected; parse
// errors report line and column. Throws ConfigError.
ScenarioConfig load_scenario(const std::string& path);

// Built-in scenarios: "paper-sec5-low-noise", "paper-sec5-high-noise".
bool is_preset(const std::string& name);
ScenarioConfig preset_scenario(const std::string& name);

// Resolves either a preset name or a file path.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

// Canonical (sorted-key) JSON form of a config; basis of the config hash.
nlohmann::json config_to_json(const ScenarioConfig& config);

// FNV-1a 64 over the canonical serialization, rendered as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

} // namespace rendezvous

#endif
