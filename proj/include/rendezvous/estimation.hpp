// Per-robot, per-axis Kalman filtering with stacked multi-channel
// measurements (odometry + IMU), plus stacking into the global estimate.
//
// The plant is the scalar integrator x' = a x + b u with a = 1, b = h, so
// the filter state, covariance and process noise are all scalars.

#ifndef RENDEZVOUS_ESTIMATION_HPP
#define RENDEZVOUS_ESTIMATION_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace rendezvous {

struct SingularInnovationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AxisFilter {
    double estimate = 0.0;       // m
    double covariance = 0.0;     // m^2, >= 0 at all times
    Eigen::VectorXd last_gain;   // per measurement channel
    double a = 1.0;
    double b = 0.0;              // = h
    double process_var = 0.0;    // m^2
    Eigen::VectorXd meas_vars;   // per-channel m^2

    static AxisFilter make(double initial_estimate, double initial_covariance,
                           double h, double process_var,
                           const Eigen::VectorXd& meas_vars);
};

struct GlobalEstimate {
    Eigen::VectorXd xs;
    Eigen::VectorXd ys;
    std::vector<std::pair<double, double>> covariances; // (P^x, P^y) per robot
};

AxisFilter kf_predict(const AxisFilter& filter, double u, double h);

// Multi-channel update with H = ones over channels and R = diag(meas_vars).
// z must have one entry per channel. Throws SingularInnovationError when the
// innovation covariance is singular and the channels conflict.
AxisFilter kf_update(const AxisFilter& filter, const Eigen::VectorXd& z);

// Unique nonnegative fixed point of the scalar covariance recursion
// P -> (P+q) - (P+q)^2 / (P+q+r), i.e. P_inf = (-q + sqrt(q^2 + 4qr)) / 2.
double steady_state_covariance(double process_var, double meas_var_effective);

// Variance of the equivalent single fused channel: harmonic combination.
double effective_meas_var(const Eigen::VectorXd& meas_vars);

GlobalEstimate stack(const std::vector<std::pair<AxisFilter, AxisFilter>>& filters);

} // namespace rendezvous

#endif
