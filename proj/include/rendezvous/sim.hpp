// Closed-loop episode execution (estimate, gain lookup, communicate,
// actuate, step truth) with convergence detection, plus the Monte Carlo
// batch runner.

#ifndef RENDEZVOUS_SIM_HPP
#define RENDEZVOUS_SIM_HPP

#include "rendezvous/control.hpp"
#include "rendezvous/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rendezvous {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GainMode { Local, Global };

struct TopologySpec {
    std::string preset = "complete";   // used when adjacency is empty
    Eigen::MatrixXd adjacency;         // explicit matrix wins when non-empty

    Topology build(int n) const;
};

struct ScalarWeights {
    double q_state = 1.0;
    double r_input = 1.0;
    double q_terminal = 1.0;
    int horizon = 0; // 0: default to max_steps
};

struct ScenarioConfig {
    std::string name = "custom";
    int schema_version = 1;
    int n = 2;
    double h = 0.1;                      // s
    std::vector<RobotState> initial_states;
    std::vector<std::pair<double, double>> initial_estimates; // empty: equal to truth
    double initial_covariance = 1e-6;    // m^2
    NoiseSpec noise;
    TopologySpec topology;
    ScalarWeights weights;
    GainMode gain_mode = GainMode::Local;
    DriveParams drive;
    double epsilon = 0.005;              // m, rendezvous loop tolerance
    int max_steps = 600;
    std::uint64_t master_seed = 42;
    int monte_carlo_runs = 200;

    void validate() const;               // throws ConfigError
    int effective_horizon() const { return weights.horizon > 0 ? weights.horizon : max_steps; }
    CostWeights cost_weights(int dim) const;
    GainSchedule synthesize_gains() const;
};

bool check_convergence(const GlobalEstimate& estimates, double epsilon);

// One closed-loop episode. With stop_on_convergence the loop terminates at
// the first converged step; otherwise it runs to max_steps while still
// recording the first convergence step.
EpisodeTrace run_episode(const ScenarioConfig& config, std::uint64_t seed,
                         bool stop_on_convergence = true);

EpisodeTrace run_episode(const ScenarioConfig& config, std::uint64_t seed,
                         const GainSchedule& schedule, bool stop_on_convergence = true);

struct BatchStats {
    int runs = 0;
    int steps = 0; // records per episode (max_steps + 1)
    std::vector<double> mse_true_x;     // mean over runs of ||x - target||^2
    std::vector<double> mse_true_y;
    std::vector<double> mse_est_x;      // mean of ||xhat - target||^2
    std::vector<double> mse_est_y;
    std::vector<double> mean_trace_px;  // mean filter covariance trace
    std::vector<double> mean_trace_py;
    std::vector<double> mean_lyapunov_x;
    std::vector<double> mean_lyapunov_y;
    double mean_cost_x = 0.0;
    double mean_cost_y = 0.0;
    std::vector<int> convergence_steps; // -1: never converged within max_steps
    std::vector<double> mean_terminal_x; // per robot, mean over runs
    std::vector<double> mean_terminal_y;
    bool divergence_flag = false; // any coordinate exceeded 10x initial magnitude bound
};

// Episodes are seeded from master_seed by run index and run to the full
// horizon so per-step statistics align across runs.
BatchStats run_monte_carlo(const ScenarioConfig& config);
BatchStats run_monte_carlo(const ScenarioConfig& config, const GainSchedule& schedule,
                           std::vector<EpisodeTrace>* keep_first = nullptr);

struct GainModeComparison {
    double max_path_deviation = 0.0; // on disagreement coordinates, zero noise
    bool within_tolerance = false;   // deviation <= 1e-6
    std::string note;
};

// Runs the scenario under both gain modes with all noise zeroed and
// compares the pairwise-difference trajectories of the estimates.
GainModeComparison compare_gain_modes(const ScenarioConfig& config);

} // namespace rendezvous

#endif
