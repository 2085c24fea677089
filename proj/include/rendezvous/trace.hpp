// Per-step episode log shared between the simulator and the analysis layer.

#ifndef RENDEZVOUS_TRACE_HPP
#define RENDEZVOUS_TRACE_HPP

#include "rendezvous/dynamics.hpp"

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace rendezvous {

struct StepRecord {
    int step = 0;
    std::vector<RobotState> truth;              // at time k, before actuation
    Eigen::VectorXd xhat;                       // posterior estimates
    Eigen::VectorXd yhat;
    Eigen::VectorXd px;                         // posterior covariances
    Eigen::VectorXd py;
    std::vector<Eigen::VectorXd> gain_x;        // Kalman gain per robot, per channel
    std::vector<Eigen::VectorXd> gain_y;
    std::vector<Eigen::VectorXd> innovation_x;  // per robot, per channel
    std::vector<Eigen::VectorXd> innovation_y;
    Eigen::VectorXd ux;                         // applied planar inputs (saturated)
    Eigen::VectorXd uy;
    std::vector<WheelSpeeds> wheels;
};

struct EpisodeTrace {
    int n = 0;
    double h = 0.0;
    double target_x = 0.0; // rendezvous point: mean of initial true positions
    double target_y = 0.0;
    std::vector<StepRecord> records;
    std::optional<int> converged_at;
    bool reached_max_steps = false;
    bool topology_warning = false; // communication graph was not connected
    double cost_x = 0.0; // realized per-axis quadratic costs
    double cost_y = 0.0;
};

} // namespace rendezvous

#endif
