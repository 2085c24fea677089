// True-state propagation of the decoupled-axis integrator model, sensor
// measurement sampling, and the differential-drive wheel-speed back-end.

#ifndef RENDEZVOUS_DYNAMICS_HPP
#define RENDEZVOUS_DYNAMICS_HPP

#include "rendezvous/rng.hpp"

namespace rendezvous {

// Speeds below this are treated as "no motion commanded": heading is held
// and no wheel command is produced.
inline constexpr double kHeadingDeadband = 1e-6;

struct RobotState {
    double x = 0.0;     // m
    double y = 0.0;     // m
    double theta = 0.0; // rad, normalized into (-pi, pi]
};

struct NoiseSpec {
    double process_var_x = 0.0;  // m^2
    double process_var_y = 0.0;  // m^2
    double meas_var_odom = 0.0;  // m^2
    double meas_var_imu = 0.0;   // m^2

    void validate() const;
};

struct DriveParams {
    double wheelbase = 0.105;        // m
    double wheel_speed_limit = 0.154; // m/s
    double heading_gain = 2.0;       // 1/s

    void validate() const;
};

// Odometry + IMU position channels, per axis.
struct Measurement {
    double z_odom_x = 0.0;
    double z_imu_x = 0.0;
    double z_odom_y = 0.0;
    double z_imu_y = 0.0;
};

struct WheelSpeeds {
    double left = 0.0;  // m/s
    double right = 0.0; // m/s
};

double wrap_angle(double theta);

RobotState step_true_state(const RobotState& state, double ux, double uy,
                           double h, double wx, double wy);

struct ProcessNoise {
    double wx = 0.0;
    double wy = 0.0;
};

ProcessNoise sample_process_noise(GaussianRng& rng, const NoiseSpec& spec);

Measurement measure(const RobotState& state, GaussianRng& rng, const NoiseSpec& spec);

// Heading-tracking conversion of a planar velocity command to clamped
// left/right wheel speeds. Per-wheel clamp only; the v_r - v_l split is not
// preserved when one side saturates.
WheelSpeeds unicycle_to_wheels(double ux, double uy, const RobotState& state,
                               const DriveParams& params);

} // namespace rendezvous

#endif
