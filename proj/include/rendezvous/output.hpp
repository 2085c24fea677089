// JSON summary / run-manifest assembly and the gain-schedule CSV dump.

#ifndef RENDEZVOUS_OUTPUT_HPP
#define RENDEZVOUS_OUTPUT_HPP

#include "rendezvous/config.hpp"
#include "rendezvous/sim.hpp"

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

namespace rendezvous {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Batch statistics, noise floor, Lyapunov means, fitted decay rate and the
// evaluated stability bound, as one self-describing document. `first_trace`
// supplies the (sample-path independent) gain/covariance sequences.
nlohmann::json build_summary(const ScenarioConfig& config, const BatchStats& stats,
                             const GainSchedule& schedule, const EpisodeTrace& first_trace,
                             const std::optional<GainModeComparison>& mode_check);

nlohmann::json build_manifest(const ScenarioConfig& config,
                              const std::vector<std::string>& output_paths,
                              double wall_seconds);

void dump_gain_schedule_csv(const GainSchedule& schedule, const std::string& path);

} // namespace rendezvous

#endif
