#include "rendezvous/output.hpp"

#include "rendezvous/analysis.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>

namespace rendezvous {

namespace {

using nlohmann::json;

json axis_bound_report(const std::vector<double>& mse, const GainSchedule& schedule,
                       const EpisodeTrace& trace, const NoiseSpec& noise, Axis axis,
                       double kappa_lo, double kappa_hi) {
    json out;
    const std::vector<double> mu_seq = noise_floor(schedule, trace, noise, axis);
    const double mu = mu_seq.empty() ? 0.0
                                     : *std::max_element(mu_seq.begin(), mu_seq.end());
    out["mu_max"] = mu;
    out["mu_k"] = mu_seq;

    double floor = 0.0;
    const std::size_t tail = std::max<std::size_t>(1, mse.size() / 10);
    for (std::size_t k = mse.size() - tail; k < mse.size(); ++k) floor += mse[k];
    floor /= static_cast<double>(tail);
    out["empirical_floor"] = floor;

    try {
        StabilityBoundParams params;
        params.kappa_lo = kappa_lo;
        params.kappa_hi = kappa_hi;
        params.lambda = estimate_decay_rate(mse, floor);
        params.mu = mu;
        params.epsilon0 = mse.front();
        out["lambda_hat"] = params.lambda;
        std::vector<double> bound;
        bound.reserve(mse.size());
        bool holds = true;
        for (int k = 0; k < static_cast<int>(mse.size()); ++k) {
            bound.push_back(ms_bound(params, k));
            if (k >= 2 && mse[k] > bound.back()) holds = false;
        }
        out["bound"] = bound;
        out["holds_after_step_1"] = holds;
    } catch (const FitError& e) {
        out["lambda_hat"] = nullptr;
        out["fit_error"] = e.what();
    }
    return out;
}

} // namespace

json build_summary(const ScenarioConfig& config, const BatchStats& stats,
                   const GainSchedule& schedule, const EpisodeTrace& first_trace,
                   const std::optional<GainModeComparison>& mode_check) {
    json j;
    j["schema_version"] = 1;
    j["artifact_version"] = kArtifactVersion;
    j["scenario"] = config.name;
    j["master_seed"] = config.master_seed;
    j["runs"] = stats.runs;
    j["steps"] = stats.steps;

    j["per_step"] = {{"mse_true_x", stats.mse_true_x},
                     {"mse_true_y", stats.mse_true_y},
                     {"mse_est_x", stats.mse_est_x},
                     {"mse_est_y", stats.mse_est_y},
                     {"mean_trace_px", stats.mean_trace_px},
                     {"mean_trace_py", stats.mean_trace_py},
                     {"mean_lyapunov_x", stats.mean_lyapunov_x},
                     {"mean_lyapunov_y", stats.mean_lyapunov_y}};
    j["mean_cost_x"] = stats.mean_cost_x;
    j["mean_cost_y"] = stats.mean_cost_y;
    j["mean_terminal_x"] = stats.mean_terminal_x;
    j["mean_terminal_y"] = stats.mean_terminal_y;
    j["divergence_flag"] = stats.divergence_flag;

    int converged = 0;
    for (int step : stats.convergence_steps) {
        if (step >= 0) ++converged;
    }
    j["convergence"] = {{"steps", stats.convergence_steps},
                        {"converged_runs", converged},
                        {"total_runs", stats.runs}};

    double kappa_lo = std::numeric_limits<double>::infinity();
    double kappa_hi = 0.0;
    for (const Eigen::MatrixXd& pi : schedule.pi) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pi, Eigen::EigenvaluesOnly);
        kappa_lo = std::min(kappa_lo, es.eigenvalues().minCoeff());
        kappa_hi = std::max(kappa_hi, es.eigenvalues().maxCoeff());
    }
    j["kappa_lo"] = kappa_lo;
    j["kappa_hi"] = kappa_hi;
    j["stability_x"] = axis_bound_report(stats.mse_true_x, schedule, first_trace,
                                         config.noise, Axis::X, kappa_lo, kappa_hi);
    j["stability_y"] = axis_bound_report(stats.mse_true_y, schedule, first_trace,
                                         config.noise, Axis::Y, kappa_lo, kappa_hi);

    if (mode_check) {
        j["gain_mode_consistency"] = {{"max_path_deviation", mode_check->max_path_deviation},
                                      {"within_tolerance", mode_check->within_tolerance},
                                      {"note", mode_check->note}};
    }
    return j;
}

json build_manifest(const ScenarioConfig& config,
                    const std::vector<std::string>& output_paths, double wall_seconds) {
    json j;
    j["scenario"] = config.name;
    j["config_hash"] = config_hash(config);
    j["master_seed"] = config.master_seed;
    j["artifact_version"] = kArtifactVersion;
    j["outputs"] = output_paths;
    j["wall_seconds"] = wall_seconds;
    return j;
}

void dump_gain_schedule_csv(const GainSchedule& schedule, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << "k,gain,pi\n";
    char buf[64];
    for (std::size_t k = 0; k < schedule.gains.size(); ++k) {
        out << k;
        std::snprintf(buf, sizeof(buf), ",%.17g", schedule.gains[k](0, 0));
        out << (schedule.gains[k].size() == 1 ? buf : ",matrix");
        std::snprintf(buf, sizeof(buf), ",%.17g", schedule.pi[k](0, 0));
        out << (schedule.pi[k].size() == 1 ? buf : ",matrix") << "\n";
    }
}

} // namespace rendezvous
