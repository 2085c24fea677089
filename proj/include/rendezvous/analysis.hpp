// Cost evaluation, Lyapunov-sequence monitoring, noise-floor computation,
// the mean-square stability bound, the Gaussian quadratic-expectation
// oracle and the empirical decay-rate fit.

#ifndef RENDEZVOUS_ANALYSIS_HPP
#define RENDEZVOUS_ANALYSIS_HPP

#include "rendezvous/control.hpp"
#include "rendezvous/rng.hpp"
#include "rendezvous/trace.hpp"

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace rendezvous {

enum class Axis { X, Y };

struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StabilityBoundParams {
    double kappa_lo = 1.0; // lower Lyapunov sandwich constant
    double kappa_hi = 1.0; // upper constant
    double lambda = 1.0;   // decay rate in (0, 1]
    double mu = 0.0;       // noise floor supremum
    double epsilon0 = 0.0; // initial mean-square error bound

    void validate() const;
};

// Realized quadratic cost of one trajectory over the weights' horizon M:
// xi_M' Q_M xi_M + sum_{k<M} (xi_k' Q xi_k + u_k' R u_k), with scalar
// weights expanded as q * I_N. Throws EvaluationError if the trace is
// shorter than M.
double evaluate_cost(const EpisodeTrace& trace, const CostWeights& weights, Axis axis);

// Same sum truncated at the trace's own final record.
double evaluate_cost_to_end(const EpisodeTrace& trace, const CostWeights& weights, Axis axis);

// V_k = xi_k' Pi_k xi_k per step.
std::vector<double> lyapunov_sequence(const EpisodeTrace& trace,
                                      const GainSchedule& schedule, Axis axis);

// Noise-floor sequence: for each step k the three trace terms driven by the
// posterior covariance, the process noise and the measurement noise,
// evaluated with K_{k+1} and Pi_{k+1}. Inputs are the stacked per-step
// Kalman gains (N x C*N, block diagonal) and posterior covariance diagonals.
std::vector<double> noise_floor(const GainSchedule& schedule,
                                const std::vector<Eigen::MatrixXd>& stacked_gains,
                                const std::vector<Eigen::VectorXd>& posterior_cov,
                                double process_var,
                                const Eigen::VectorXd& meas_vars);

// Convenience: assemble the stacked inputs for one axis of a trace.
std::vector<double> noise_floor(const GainSchedule& schedule, const EpisodeTrace& trace,
                                const NoiseSpec& noise, Axis axis);

// (kappa_hi/kappa_lo) eps (1-lambda)^k + (mu/kappa_lo) sum_{m=1}^{k-1} (1-lambda)^m.
double ms_bound(const StabilityBoundParams& params, int k);

struct QuadFormCheck {
    double empirical = 0.0;
    double analytic = 0.0;
    double std_error = 0.0;
};

// Monte Carlo check of E[x' S x] = m' S m + tr(S R) for Gaussian x.
QuadFormCheck quadratic_expectation_oracle(const Eigen::VectorXd& mean,
                                           const Eigen::MatrixXd& cov,
                                           const Eigen::MatrixXd& s,
                                           long samples, GaussianRng& rng);

// Least-squares geometric-rate fit of the transient window of a
// mean-square error sequence: slope of log(mse_k - floor) over the leading
// window where the residual still exceeds 1% of its initial value (and
// 10x the floor). Returns lambda in (0, 1]; throws FitError when the data
// carry no decay or the window is unusable.
double estimate_decay_rate(const std::vector<double>& mse, double floor = 0.0);

} // namespace rendezvous

#endif
