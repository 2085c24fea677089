#include "rendezvous/analysis.hpp"

#include <cmath>

namespace rendezvous {

namespace {

// xi' W xi with a 1x1 weight standing for w * I.
double quad_form(const Eigen::MatrixXd& w, const Eigen::VectorXd& v) {
    if (w.size() == 1) {
        return w(0, 0) * v.squaredNorm();
    }
    if (w.rows() != v.size()) {
        throw EvaluationError("cost: weight dimension does not match trace");
    }
    return v.dot(w * v);
}

Eigen::VectorXd error_vec(const StepRecord& rec, const EpisodeTrace& trace, Axis axis) {
    if (axis == Axis::X) {
        return rec.xhat.array() - trace.target_x;
    }
    return rec.yhat.array() - trace.target_y;
}

double cost_over(const EpisodeTrace& trace, const CostWeights& weights, Axis axis,
                 int horizon) {
    double cost = quad_form(weights.q_terminal,
                            error_vec(trace.records[horizon], trace, axis));
    for (int k = 0; k < horizon; ++k) {
        const StepRecord& rec = trace.records[k];
        cost += quad_form(weights.q_state, error_vec(rec, trace, axis));
        cost += quad_form(weights.r_input, axis == Axis::X ? rec.ux : rec.uy);
    }
    return cost;
}

} // namespace

void StabilityBoundParams::validate() const {
    if (kappa_lo <= 0.0 || kappa_hi < kappa_lo) {
        throw std::invalid_argument("bound: need 0 < kappa_lo <= kappa_hi");
    }
    if (lambda <= 0.0 || lambda > 1.0) {
        throw std::invalid_argument("bound: need lambda in (0, 1]");
    }
    if (mu < 0.0 || epsilon0 < 0.0) {
        throw std::invalid_argument("bound: mu and epsilon0 must be >= 0");
    }
}

double evaluate_cost(const EpisodeTrace& trace, const CostWeights& weights, Axis axis) {
    if (static_cast<int>(trace.records.size()) < weights.horizon + 1) {
        throw EvaluationError("cost: trace shorter than the weights' horizon");
    }
    return cost_over(trace, weights, axis, weights.horizon);
}

double evaluate_cost_to_end(const EpisodeTrace& trace, const CostWeights& weights, Axis axis) {
    if (trace.records.empty()) {
        throw EvaluationError("cost: empty trace");
    }
    return cost_over(trace, weights, axis, static_cast<int>(trace.records.size()) - 1);
}

std::vector<double> lyapunov_sequence(const EpisodeTrace& trace,
                                      const GainSchedule& schedule, Axis axis) {
    std::vector<double> v;
    v.reserve(trace.records.size());
    for (const StepRecord& rec : trace.records) {
        const Eigen::VectorXd xi = error_vec(rec, trace, axis);
        const Eigen::MatrixXd& pi = schedule.pi_at(rec.step);
        v.push_back(quad_form(pi, xi));
    }
    return v;
}

std::vector<double> noise_floor(const GainSchedule& schedule,
                                const std::vector<Eigen::MatrixXd>& stacked_gains,
                                const std::vector<Eigen::VectorXd>& posterior_cov,
                                double process_var,
                                const Eigen::VectorXd& meas_vars) {
    if (stacked_gains.size() != posterior_cov.size()) {
        throw std::invalid_argument("noise_floor: gain/covariance length mismatch");
    }
    const int steps = static_cast<int>(stacked_gains.size());
    std::vector<double> mu;
    if (steps < 2) return mu;

    const Eigen::Index n = stacked_gains.front().rows();
    const Eigen::Index c = meas_vars.size();
    const Eigen::MatrixXd h_stack =
        kronecker(Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Ones(c, 1));
    const Eigen::MatrixXd v_bar =
        kronecker(Eigen::MatrixXd::Identity(n, n),
                  Eigen::MatrixXd(meas_vars.asDiagonal()));
    const Eigen::MatrixXd w_bar = process_var * Eigen::MatrixXd::Identity(n, n);

    mu.reserve(steps - 1);
    for (int k = 0; k + 1 < steps; ++k) {
        const Eigen::MatrixXd& gain = stacked_gains[k + 1];
        const Eigen::MatrixXd& pi_raw = schedule.pi_at(k + 1);
        const Eigen::MatrixXd pi = pi_raw.size() == 1
                                       ? Eigen::MatrixXd(pi_raw(0, 0) *
                                                         Eigen::MatrixXd::Identity(n, n))
                                       : pi_raw;
        const Eigen::MatrixXd core = gain.transpose() * pi * gain; // (C N) x (C N)
        const Eigen::MatrixXd projected = h_stack.transpose() * core * h_stack; // N x N
        const Eigen::MatrixXd p_bar = Eigen::MatrixXd(posterior_cov[k].asDiagonal());
        const double term_p = (projected * p_bar).trace();
        const double term_w = (projected * w_bar).trace();
        const double term_v = (core * v_bar).trace();
        mu.push_back(term_p + term_w + term_v);
    }
    return mu;
}

std::vector<double> noise_floor(const GainSchedule& schedule, const EpisodeTrace& trace,
                                const NoiseSpec& noise, Axis axis) {
    const int n = trace.n;
    Eigen::VectorXd meas_vars(2);
    meas_vars << noise.meas_var_odom, noise.meas_var_imu;
    const Eigen::Index c = meas_vars.size();

    std::vector<Eigen::MatrixXd> gains;
    std::vector<Eigen::VectorXd> covs;
    gains.reserve(trace.records.size());
    covs.reserve(trace.records.size());
    for (const StepRecord& rec : trace.records) {
        Eigen::MatrixXd stacked = Eigen::MatrixXd::Zero(n, c * n);
        const auto& per_robot = axis == Axis::X ? rec.gain_x : rec.gain_y;
        for (int i = 0; i < n; ++i) {
            stacked.block(i, c * i, 1, c) = per_robot[i].transpose();
        }
        gains.push_back(std::move(stacked));
        covs.push_back(axis == Axis::X ? rec.px : rec.py);
    }
    const double w = axis == Axis::X ? noise.process_var_x : noise.process_var_y;
    return noise_floor(schedule, gains, covs, w, meas_vars);
}

double ms_bound(const StabilityBoundParams& params, int k) {
    params.validate();
    if (k < 0) {
        throw std::invalid_argument("ms_bound: step index must be >= 0");
    }
    const double decay = 1.0 - params.lambda;
    const double transient =
        (params.kappa_hi / params.kappa_lo) * params.epsilon0 * std::pow(decay, k);
    double tail = 0.0;
    if (k >= 2) {
        // sum_{m=1}^{k-1} decay^m
        tail = decay == 0.0
                   ? 0.0
                   : decay * (1.0 - std::pow(decay, k - 1)) / (1.0 - decay);
    }
    return transient + (params.mu / params.kappa_lo) * tail;
}

QuadFormCheck quadratic_expectation_oracle(const Eigen::VectorXd& mean,
                                           const Eigen::MatrixXd& cov,
                                           const Eigen::MatrixXd& s,
                                           long samples, GaussianRng& rng) {
    const Eigen::Index n = mean.size();
    if (cov.rows() != n || cov.cols() != n || s.rows() != n || s.cols() != n) {
        throw std::invalid_argument("quadratic oracle: dimension mismatch");
    }
    const double scale = 1.0 + cov.cwiseAbs().maxCoeff();
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw std::invalid_argument("quadratic oracle: covariance must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.eigenvalues().minCoeff() < -1e-9 * scale) {
        throw std::invalid_argument("quadratic oracle: covariance must be PSD");
    }
    if (samples < 10000) {
        throw std::invalid_argument("quadratic oracle: need at least 10^4 samples");
    }
    const Eigen::MatrixXd sqrt_cov =
        es.eigenvectors() *
        es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
        es.eigenvectors().transpose();

    // Welford accumulation of x' S x.
    double running_mean = 0.0;
    double m2 = 0.0;
    Eigen::VectorXd z(n);
    for (long i = 0; i < samples; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            z(j) = rng.normal();
        }
        const Eigen::VectorXd x = mean + sqrt_cov * z;
        const double value = x.dot(s * x);
        const double delta = value - running_mean;
        running_mean += delta / static_cast<double>(i + 1);
        m2 += delta * (value - running_mean);
    }
    QuadFormCheck out;
    out.empirical = running_mean;
    out.analytic = mean.dot(s * mean) + (s * cov).trace();
    out.std_error = std::sqrt(m2 / static_cast<double>(samples - 1) /
                              static_cast<double>(samples));
    return out;
}

double estimate_decay_rate(const std::vector<double>& mse, double floor) {
    long positive = 0;
    for (double v : mse) {
        if (v - floor > 0.0) ++positive;
    }
    if (positive < 20) {
        throw FitError("decay fit: need >= 20 strictly positive residuals");
    }
    const double r0 = mse.front() - floor;
    if (r0 <= 0.0) {
        throw FitError("decay fit: nonpositive initial residual");
    }
    const double cutoff = std::max(1e-2 * r0, 10.0 * floor);

    // Leading transient window: residual still above 1% of its start.
    std::vector<double> logs;
    for (double v : mse) {
        const double r = v - floor;
        if (r < cutoff) break;
        logs.push_back(std::log(r));
    }
    if (logs.size() < 3) {
        throw FitError("decay fit: transient window too short");
    }

    const double m = static_cast<double>(logs.size());
    double sum_k = 0.0, sum_y = 0.0, sum_kk = 0.0, sum_ky = 0.0;
    for (std::size_t k = 0; k < logs.size(); ++k) {
        sum_k += static_cast<double>(k);
        sum_y += logs[k];
        sum_kk += static_cast<double>(k) * static_cast<double>(k);
        sum_ky += static_cast<double>(k) * logs[k];
    }
    const double slope = (m * sum_ky - sum_k * sum_y) / (m * sum_kk - sum_k * sum_k);
    const double lambda = 1.0 - std::exp(slope);
    // Slopes at roundoff scale mean a flat sequence, not decay.
    if (lambda <= 1e-12 || lambda > 1.0) {
        throw FitError("decay fit: sequence does not decay");
    }
    return lambda;
}

} // namespace rendezvous
