#include "rendezvous/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rendezvous {

void NoiseSpec::validate() const {
    if (process_var_x < 0.0 || process_var_y < 0.0 || meas_var_odom < 0.0 ||
        meas_var_imu < 0.0) {
        throw std::invalid_argument("noise: variances must be >= 0");
    }
}

void DriveParams::validate() const {
    if (wheelbase <= 0.0 || wheel_speed_limit <= 0.0 || heading_gain <= 0.0) {
        throw std::invalid_argument("drive: wheelbase, speed limit and heading gain must be > 0");
    }
}

double wrap_angle(double theta) {
    theta = std::fmod(theta, 2.0 * M_PI);
    if (theta > M_PI) theta -= 2.0 * M_PI;
    if (theta <= -M_PI) theta += 2.0 * M_PI;
    return theta;
}

RobotState step_true_state(const RobotState& state, double ux, double uy,
                           double h, double wx, double wy) {
    if (h <= 0.0) {
        throw std::invalid_argument("step_true_state: sampling interval must be > 0");
    }
    RobotState next;
    next.x = state.x + h * ux + wx;
    next.y = state.y + h * uy + wy;
    const double speed = std::hypot(ux, uy);
    next.theta = speed > kHeadingDeadband ? wrap_angle(std::atan2(uy, ux)) : state.theta;
    return next;
}

ProcessNoise sample_process_noise(GaussianRng& rng, const NoiseSpec& spec) {
    spec.validate();
    ProcessNoise w;
    w.wx = rng.normal(0.0, spec.process_var_x);
    w.wy = rng.normal(0.0, spec.process_var_y);
    return w;
}

Measurement measure(const RobotState& state, GaussianRng& rng, const NoiseSpec& spec) {
    spec.validate();
    Measurement z;
    z.z_odom_x = rng.normal(state.x, spec.meas_var_odom);
    z.z_imu_x = rng.normal(state.x, spec.meas_var_imu);
    z.z_odom_y = rng.normal(state.y, spec.meas_var_odom);
    z.z_imu_y = rng.normal(state.y, spec.meas_var_imu);
    return z;
}

WheelSpeeds unicycle_to_wheels(double ux, double uy, const RobotState& state,
                               const DriveParams& params) {
    params.validate();
    const double speed = std::hypot(ux, uy);
    if (speed <= kHeadingDeadband) {
        return {0.0, 0.0};
    }
    const double limit = params.wheel_speed_limit;
    const double heading_error = wrap_angle(std::atan2(uy, ux) - state.theta);
    const double v = std::clamp(ux * std::cos(state.theta) + uy * std::sin(state.theta),
                                -limit, limit);
    const double omega = params.heading_gain * heading_error;
    WheelSpeeds w;
    w.right = std::clamp(v + omega * params.wheelbase / 2.0, -limit, limit);
    w.left = std::clamp(v - omega * params.wheelbase / 2.0, -limit, limit);
    return w;
}

} // namespace rendezvous
