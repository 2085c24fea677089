#include "rendezvous/sim.hpp"

#include "rendezvous/analysis.hpp"

#include <cmath>
#include <numeric>

namespace rendezvous {

namespace {

// Compensated accumulator for deterministic batch aggregation.
class KahanSum {
public:
    void add(double value) {
        const double y = value - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    double get() const { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double max_pairwise_gap(const Eigen::VectorXd& v) {
    return v.maxCoeff() - v.minCoeff();
}

} // namespace

Topology TopologySpec::build(int n) const {
    Topology t;
    if (adjacency.size() > 0) {
        t.n = n;
        t.adjacency = adjacency;
    } else {
        t = Topology::from_preset(preset, n);
    }
    t.validate();
    return t;
}

void ScenarioConfig::validate() const {
    try {
        if (n < 2) throw std::invalid_argument("n must be >= 2");
        if (h <= 0.0) throw std::invalid_argument("h must be > 0");
        if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
        if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
        if (static_cast<int>(initial_states.size()) != n) {
            throw std::invalid_argument("initial_states must list one pose per robot");
        }
        if (!initial_estimates.empty() &&
            static_cast<int>(initial_estimates.size()) != n) {
            throw std::invalid_argument("initial_estimates must list one entry per robot");
        }
        if (initial_covariance < 0.0) {
            throw std::invalid_argument("initial_covariance must be >= 0");
        }
        if (weights.q_state < 0.0 || weights.q_terminal < 0.0) {
            throw std::invalid_argument("state weights must be >= 0");
        }
        if (weights.r_input <= 0.0) {
            throw std::invalid_argument("r_input must be > 0");
        }
        if (weights.horizon < 0) {
            throw std::invalid_argument("horizon must be >= 0 (0 = max_steps)");
        }
        if (monte_carlo_runs < 1) {
            throw std::invalid_argument("monte_carlo_runs must be >= 1");
        }
        noise.validate();
        drive.validate();
        topology.build(n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario '") + name + "': " + e.what());
    }
}

CostWeights ScenarioConfig::cost_weights(int dim) const {
    return CostWeights::uniform(weights.q_state, weights.r_input, weights.q_terminal,
                                effective_horizon(), dim);
}

GainSchedule ScenarioConfig::synthesize_gains() const {
    if (gain_mode == GainMode::Local) {
        return local_riccati(cost_weights(1), h);
    }
    const Topology topo = topology.build(n);
    const Eigen::MatrixXd l = laplacian(topo).entries;
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd b = h * l;
    return riccati_backward(cost_weights(n), a, b);
}

bool check_convergence(const GlobalEstimate& estimates, double epsilon) {
    if (estimates.xs.size() < 2) {
        throw std::invalid_argument("check_convergence: need at least two robots");
    }
    return max_pairwise_gap(estimates.xs) <= epsilon &&
           max_pairwise_gap(estimates.ys) <= epsilon;
}

EpisodeTrace run_episode(const ScenarioConfig& config, std::uint64_t seed,
                         bool stop_on_convergence) {
    return run_episode(config, seed, config.synthesize_gains(), stop_on_convergence);
}

EpisodeTrace run_episode(const ScenarioConfig& config, std::uint64_t seed,
                         const GainSchedule& schedule, bool stop_on_convergence) {
    config.validate();
    const int n = config.n;
    const Topology topo = config.topology.build(n);

    GaussianRng rng(seed);
    Eigen::VectorXd meas_vars(2);
    meas_vars << config.noise.meas_var_odom, config.noise.meas_var_imu;

    std::vector<RobotState> truth = config.initial_states;
    std::vector<std::pair<AxisFilter, AxisFilter>> filters;
    filters.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x0 = config.initial_estimates.empty() ? truth[i].x
                                                           : config.initial_estimates[i].first;
        const double y0 = config.initial_estimates.empty() ? truth[i].y
                                                           : config.initial_estimates[i].second;
        filters.emplace_back(
            AxisFilter::make(x0, config.initial_covariance, config.h,
                             config.noise.process_var_x, meas_vars),
            AxisFilter::make(y0, config.initial_covariance, config.h,
                             config.noise.process_var_y, meas_vars));
    }

    EpisodeTrace trace;
    trace.n = n;
    trace.h = config.h;
    trace.topology_warning = !is_connected(topo);
    for (const RobotState& s : truth) {
        trace.target_x += s.x / n;
        trace.target_y += s.y / n;
    }

    Eigen::VectorXd u_prev_x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd u_prev_y = Eigen::VectorXd::Zero(n);

    for (int k = 0; k < config.max_steps; ++k) {
        StepRecord rec;
        rec.step = k;
        rec.truth = truth;
        rec.xhat.resize(n);
        rec.yhat.resize(n);
        rec.px.resize(n);
        rec.py.resize(n);
        rec.gain_x.resize(n);
        rec.gain_y.resize(n);
        rec.innovation_x.resize(n);
        rec.innovation_y.resize(n);
        rec.wheels.resize(n);

        // Sense, then predict/update every robot synchronously.
        for (int i = 0; i < n; ++i) {
            const Measurement z = measure(truth[i], rng, config.noise);
            Eigen::VectorXd zx(2), zy(2);
            zx << z.z_odom_x, z.z_imu_x;
            zy << z.z_odom_y, z.z_imu_y;

            AxisFilter fx = kf_predict(filters[i].first, u_prev_x(i), config.h);
            AxisFilter fy = kf_predict(filters[i].second, u_prev_y(i), config.h);
            rec.innovation_x[i] = zx - Eigen::VectorXd::Constant(2, fx.estimate);
            rec.innovation_y[i] = zy - Eigen::VectorXd::Constant(2, fy.estimate);
            filters[i].first = kf_update(fx, zx);
            filters[i].second = kf_update(fy, zy);

            rec.xhat(i) = filters[i].first.estimate;
            rec.yhat(i) = filters[i].second.estimate;
            rec.px(i) = filters[i].first.covariance;
            rec.py(i) = filters[i].second.covariance;
            rec.gain_x[i] = filters[i].first.last_gain;
            rec.gain_y[i] = filters[i].second.last_gain;
        }

        // Gain lookup, estimate exchange (idealized) and the rendezvous update.
        const GlobalEstimate est = stack(filters);
        ControlInputs u = distributed_control(est, topo, schedule.gain_at(k), k);
        u = saturate_inputs(u, config.drive);
        rec.ux = u.ux;
        rec.uy = u.uy;

        for (int i = 0; i < n; ++i) {
            rec.wheels[i] = unicycle_to_wheels(u.ux(i), u.uy(i), truth[i], config.drive);
        }
        trace.records.push_back(std::move(rec));

        // Actuate.
        for (int i = 0; i < n; ++i) {
            const ProcessNoise w = sample_process_noise(rng, config.noise);
            truth[i] = step_true_state(truth[i], u.ux(i), u.uy(i), config.h, w.wx, w.wy);
        }
        u_prev_x = u.ux;
        u_prev_y = u.uy;

        if (!trace.converged_at && check_convergence(est, config.epsilon)) {
            trace.converged_at = k;
        }
        if (trace.converged_at && stop_on_convergence) {
            break;
        }
    }
    trace.reached_max_steps = !trace.converged_at;

    const CostWeights w = config.cost_weights(1);
    trace.cost_x = evaluate_cost_to_end(trace, w, Axis::X);
    trace.cost_y = evaluate_cost_to_end(trace, w, Axis::Y);
    return trace;
}

BatchStats run_monte_carlo(const ScenarioConfig& config) {
    return run_monte_carlo(config, config.synthesize_gains());
}

BatchStats run_monte_carlo(const ScenarioConfig& config, const GainSchedule& schedule,
                           std::vector<EpisodeTrace>* keep_first) {
    config.validate();
    const int runs = config.monte_carlo_runs;
    const int n = config.n;

    BatchStats stats;
    stats.runs = runs;

    std::vector<KahanSum> mse_tx, mse_ty, mse_ex, mse_ey, tr_px, tr_py, ly_x, ly_y;
    std::vector<KahanSum> term_x(n), term_y(n);
    KahanSum cost_x, cost_y;

    double init_mag_x = 0.0, init_mag_y = 0.0;
    for (const RobotState& s : config.initial_states) {
        init_mag_x = std::max(init_mag_x, std::abs(s.x));
        init_mag_y = std::max(init_mag_y, std::abs(s.y));
    }

    for (int run = 0; run < runs; ++run) {
        const std::uint64_t seed = episode_seed(config.master_seed, run);
        EpisodeTrace trace = run_episode(config, seed, schedule,
                                         /*stop_on_convergence=*/false);
        if (run == 0) {
            stats.steps = static_cast<int>(trace.records.size());
            const std::size_t len = trace.records.size();
            mse_tx.resize(len);
            mse_ty.resize(len);
            mse_ex.resize(len);
            mse_ey.resize(len);
            tr_px.resize(len);
            tr_py.resize(len);
            ly_x.resize(len);
            ly_y.resize(len);
        }
        if (static_cast<int>(trace.records.size()) != stats.steps) {
            throw std::runtime_error("monte carlo: episode length mismatch");
        }

        const std::vector<double> vx = lyapunov_sequence(trace, schedule, Axis::X);
        const std::vector<double> vy = lyapunov_sequence(trace, schedule, Axis::Y);
        for (std::size_t k = 0; k < trace.records.size(); ++k) {
            const StepRecord& rec = trace.records[k];
            double tx = 0.0, ty = 0.0;
            for (int i = 0; i < n; ++i) {
                const double ex = rec.truth[i].x - trace.target_x;
                const double ey = rec.truth[i].y - trace.target_y;
                tx += ex * ex;
                ty += ey * ey;
                if (std::abs(ex) > 10.0 * std::max(init_mag_x, 0.01) ||
                    std::abs(ey) > 10.0 * std::max(init_mag_y, 0.01)) {
                    stats.divergence_flag = true;
                }
            }
            mse_tx[k].add(tx);
            mse_ty[k].add(ty);
            mse_ex[k].add((rec.xhat.array() - trace.target_x).square().sum());
            mse_ey[k].add((rec.yhat.array() - trace.target_y).square().sum());
            tr_px[k].add(rec.px.sum());
            tr_py[k].add(rec.py.sum());
            ly_x[k].add(vx[k]);
            ly_y[k].add(vy[k]);
        }
        cost_x.add(trace.cost_x);
        cost_y.add(trace.cost_y);
        stats.convergence_steps.push_back(trace.converged_at ? *trace.converged_at : -1);
        const StepRecord& last = trace.records.back();
        for (int i = 0; i < n; ++i) {
            term_x[i].add(last.truth[i].x);
            term_y[i].add(last.truth[i].y);
        }
        if (keep_first && run == 0) {
            keep_first->push_back(std::move(trace));
        }
    }

    const double inv = 1.0 / static_cast<double>(runs);
    auto collect = [inv](const std::vector<KahanSum>& acc) {
        std::vector<double> out;
        out.reserve(acc.size());
        for (const KahanSum& s : acc) out.push_back(s.get() * inv);
        return out;
    };
    stats.mse_true_x = collect(mse_tx);
    stats.mse_true_y = collect(mse_ty);
    stats.mse_est_x = collect(mse_ex);
    stats.mse_est_y = collect(mse_ey);
    stats.mean_trace_px = collect(tr_px);
    stats.mean_trace_py = collect(tr_py);
    stats.mean_lyapunov_x = collect(ly_x);
    stats.mean_lyapunov_y = collect(ly_y);
    stats.mean_cost_x = cost_x.get() * inv;
    stats.mean_cost_y = cost_y.get() * inv;
    for (int i = 0; i < n; ++i) {
        stats.mean_terminal_x.push_back(term_x[i].get() * inv);
        stats.mean_terminal_y.push_back(term_y[i].get() * inv);
    }
    return stats;
}

GainModeComparison compare_gain_modes(const ScenarioConfig& config) {
    ScenarioConfig quiet = config;
    quiet.noise = NoiseSpec{};
    quiet.name = config.name + "-mode-compare";

    ScenarioConfig local_cfg = quiet;
    local_cfg.gain_mode = GainMode::Local;
    ScenarioConfig global_cfg = quiet;
    global_cfg.gain_mode = GainMode::Global;

    const EpisodeTrace local = run_episode(local_cfg, 0, false);
    const EpisodeTrace global = run_episode(global_cfg, 0, false);

    GainModeComparison cmp;
    const std::size_t steps = std::min(local.records.size(), global.records.size());
    for (std::size_t k = 0; k < steps; ++k) {
        for (int i = 0; i < config.n; ++i) {
            for (int j = i + 1; j < config.n; ++j) {
                const double dx_l = local.records[k].xhat(i) - local.records[k].xhat(j);
                const double dx_g = global.records[k].xhat(i) - global.records[k].xhat(j);
                const double dy_l = local.records[k].yhat(i) - local.records[k].yhat(j);
                const double dy_g = global.records[k].yhat(i) - global.records[k].yhat(j);
                cmp.max_path_deviation = std::max(
                    {cmp.max_path_deviation, std::abs(dx_l - dx_g), std::abs(dy_l - dy_g)});
            }
        }
    }
    cmp.within_tolerance = cmp.max_path_deviation <= 1e-6;
    if (cmp.within_tolerance) {
        cmp.note = "local and global gain modes agree on the disagreement coordinates";
    } else {
        cmp.note =
            "local and global gain modes disagree: the global synthesis routes the "
            "input through the Laplacian, so its disagreement channel sees input gain "
            "h*eig(L) instead of h and solves a different scalar Riccati problem";
    }
    return cmp;
}

} // namespace rendezvous
