#include "rendezvous/verify.hpp"

#include "rendezvous/analysis.hpp"
#include "rendezvous/config.hpp"
#include "rendezvous/estimation.hpp"
#include "rendezvous/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace rendezvous {

namespace {

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

double log_uniform(GaussianRng& rng, double lo, double hi) {
    return lo * std::exp(rng.uniform() * std::log(hi / lo));
}

// Closed-loop cost of a scalar instance under a given gain sequence.
double scalar_trajectory_cost(double a, double b, double q, double r, double q_m,
                              double x0, const std::vector<double>& gains) {
    double x = x0;
    double cost = 0.0;
    for (double gain : gains) {
        const double u = -gain * x;
        cost += q * x * x + r * u * u;
        x = a * x + b * u;
    }
    return cost + q_m * x * x;
}

// Direct minimization over the open-loop input sequence: x = phi x0 + T u,
// minimize x' Q x + u' R u by solving the normal equations. Independent of
// the Riccati recursion.
double scalar_least_squares_cost(double a, double b, double q, double r, double q_m,
                                 double x0, int horizon) {
    const int m = horizon;
    Eigen::VectorXd phi(m + 1);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, m);
    for (int k = 0; k <= m; ++k) {
        phi(k) = std::pow(a, k) * x0;
        for (int j = 0; j < k; ++j) {
            t(k, j) = std::pow(a, k - 1 - j) * b;
        }
    }
    Eigen::VectorXd q_diag = Eigen::VectorXd::Constant(m + 1, q);
    q_diag(m) = q_m;
    const Eigen::MatrixXd tq = t.transpose() * q_diag.asDiagonal();
    const Eigen::MatrixXd hess = tq * t + r * Eigen::MatrixXd::Identity(m, m);
    const Eigen::VectorXd u = Eigen::LDLT<Eigen::MatrixXd>(hess).solve(-tq * phi);
    const Eigen::VectorXd x = phi + t * u;
    return x.dot(q_diag.asDiagonal() * x) + r * u.squaredNorm();
}

} // namespace

SuiteResult verify_kalman() {
    SuiteResult result{"kalman"};
    GaussianRng rng(2024);
    const int pairs = 50;
    const double tol = 1e-10;
    for (int trial = 0; trial < pairs; ++trial) {
        const double q = log_uniform(rng, 1e-9, 1e-2);
        const double r = log_uniform(rng, 1e-9, 1e-2);
        const double target = steady_state_covariance(q, r);

        Eigen::VectorXd meas(1);
        meas << r;
        AxisFilter f = AxisFilter::make(0.0, 1e-4, 0.1, q, meas);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(1);
        long iters = 0;
        const long max_iters = 2000000;
        while (std::abs(f.covariance - target) > 0.5 * tol && iters < max_iters) {
            f = kf_update(kf_predict(f, 0.0, 0.1), z);
            ++iters;
        }
        const double err = std::abs(f.covariance - target);
        if (err > tol) result.pass = false;
        if (trial < 5 || err > tol) {
            result.lines.push_back(format("q=%.3e r=%.3e P_inf=%.12e err=%.3e iters=%ld",
                                          q, r, target, err, iters));
        }
    }
    return result;
}

SuiteResult verify_riccati() {
    SuiteResult result{"riccati"};
    GaussianRng rng(7);
    const int instances = 20;
    for (int trial = 0; trial < instances; ++trial) {
        const int horizon = 1 + static_cast<int>(rng.uniform() * 4.0);
        const double a = 0.5 + rng.uniform();
        const double b = 0.05 + 0.95 * rng.uniform();
        const double q = log_uniform(rng, 0.1, 3.0);
        const double r = log_uniform(rng, 0.1, 3.0);
        const double q_m = log_uniform(rng, 0.1, 3.0);
        const double x0 = 0.2 + 0.8 * rng.uniform();

        CostWeights w = CostWeights::scalar(q, r, q_m, horizon);
        Eigen::MatrixXd am(1, 1), bm(1, 1);
        am << a;
        bm << b;
        const GainSchedule schedule = riccati_backward(w, am, bm);
        std::vector<double> gains;
        for (const auto& g : schedule.gains) gains.push_back(g(0, 0));
        const double j_synth = scalar_trajectory_cost(a, b, q, r, q_m, x0, gains);
        const double j_oracle = scalar_least_squares_cost(a, b, q, r, q_m, x0, horizon);

        const double gap = std::abs(j_synth - j_oracle);
        bool beat_random = true;
        std::vector<double> random_gains(horizon);
        for (int s = 0; s < 10000; ++s) {
            for (double& g : random_gains) {
                g = -1.0 + 4.0 * rng.uniform();
            }
            const double j_rand =
                scalar_trajectory_cost(a, b, q, r, q_m, x0, random_gains);
            if (j_rand < j_synth - 1e-9) {
                beat_random = false;
                break;
            }
        }
        const bool ok = gap <= 1e-8 && beat_random;
        if (!ok) result.pass = false;
        if (trial < 5 || !ok) {
            result.lines.push_back(format(
                "M=%d a=%.3f b=%.3f J_synth=%.12e J_oracle=%.12e gap=%.3e random_ok=%d",
                horizon, a, b, j_synth, j_oracle, gap, beat_random ? 1 : 0));
        }
    }
    return result;
}

SuiteResult verify_lemma1() {
    SuiteResult result{"lemma1"};
    GaussianRng rng(99);
    const int triples = 20;
    const long samples = 1000000;
    for (int trial = 0; trial < triples; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 3.0);
        Eigen::VectorXd mean(n);
        for (int i = 0; i < n; ++i) mean(i) = rng.normal();
        Eigen::MatrixXd g(n, n), s(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                g(i, j) = rng.normal();
                s(i, j) = rng.normal();
            }
        }
        const Eigen::MatrixXd cov = g * g.transpose();
        const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());

        const QuadFormCheck check = quadratic_expectation_oracle(mean, cov, sym, samples, rng);
        const double gap = std::abs(check.empirical - check.analytic);
        const bool ok = gap < 5.0 * check.std_error;
        if (!ok) result.pass = false;
        result.lines.push_back(format("n=%d empirical=%.6f analytic=%.6f gap=%.2e (%.2f se)",
                                      n, check.empirical, check.analytic, gap,
                                      gap / check.std_error));
    }
    return result;
}

SuiteResult verify_bound() {
    SuiteResult result{"bound"};
    const ScenarioConfig config = preset_scenario("paper-sec5-low-noise");
    const GainSchedule schedule = config.synthesize_gains();
    std::vector<EpisodeTrace> first;
    const BatchStats stats = run_monte_carlo(config, schedule, &first);

    double kappa_lo = std::numeric_limits<double>::infinity();
    double kappa_hi = 0.0;
    for (const Eigen::MatrixXd& pi : schedule.pi) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pi, Eigen::EigenvaluesOnly);
        kappa_lo = std::min(kappa_lo, es.eigenvalues().minCoeff());
        kappa_hi = std::max(kappa_hi, es.eigenvalues().maxCoeff());
    }

    for (Axis axis : {Axis::X, Axis::Y}) {
        const std::vector<double>& mse =
            axis == Axis::X ? stats.mse_true_x : stats.mse_true_y;
        const std::vector<double> mu_seq =
            noise_floor(schedule, first.front(), config.noise, axis);
        const double mu = *std::max_element(mu_seq.begin(), mu_seq.end());

        // Empirical steady level as the fit's floor.
        double floor = 0.0;
        const std::size_t tail = mse.size() / 10;
        for (std::size_t k = mse.size() - tail; k < mse.size(); ++k) floor += mse[k];
        floor /= static_cast<double>(tail);

        StabilityBoundParams params;
        params.kappa_lo = kappa_lo;
        params.kappa_hi = kappa_hi;
        params.lambda = estimate_decay_rate(mse, floor);
        params.mu = mu;
        params.epsilon0 = mse.front();

        bool ok = true;
        double worst_ratio = 0.0;
        int worst_k = -1;
        for (int k = 2; k < static_cast<int>(mse.size()); ++k) {
            const double bound = ms_bound(params, k);
            const double ratio = mse[k] / bound;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst_k = k;
            }
            if (mse[k] > bound) ok = false;
        }
        if (!ok) result.pass = false;
        result.lines.push_back(format(
            "axis=%c lambda=%.4f mu=%.3e kappa=[%.3f, %.3f] eps0=%.4e "
            "worst mse/bound=%.3e at k=%d -> %s",
            axis == Axis::X ? 'x' : 'y', params.lambda, mu, kappa_lo, kappa_hi,
            params.epsilon0, worst_ratio, worst_k, ok ? "holds" : "VIOLATED"));
    }
    return result;
}

SuiteResult run_suite(const std::string& name) {
    if (name == "kalman") return verify_kalman();
    if (name == "riccati") return verify_riccati();
    if (name == "lemma1") return verify_lemma1();
    if (name == "bound") return verify_bound();
    throw std::invalid_argument("unknown verify suite '" + name + "'");
}

} // namespace rendezvous
