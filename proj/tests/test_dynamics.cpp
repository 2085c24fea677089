#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rendezvous/dynamics.hpp"

#include <cmath>
#include <vector>

using namespace rendezvous;

TEST_CASE("step_true_state hand examples") {
    RobotState s;
    s.x = 0.2;
    CHECK(step_true_state(s, 0.0, 0.0, 0.1, 0.0, 0.0).x == 0.2);

    RobotState o;
    CHECK(step_true_state(o, 1.0, 0.0, 0.1, 0.0, 0.0).x == doctest::Approx(0.1).epsilon(1e-15));

    RobotState t;
    t.x = 0.2;
    // 0.2 - 0.05 + 0.01
    CHECK(step_true_state(t, -0.5, 0.0, 0.1, 0.01, 0.0).x == doctest::Approx(0.16).epsilon(1e-15));
}

TEST_CASE("heading follows the commanded velocity, held below the deadband") {
    RobotState s;
    s.theta = 0.7;
    const RobotState moved = step_true_state(s, 0.0, 1.0, 0.1, 0.0, 0.0);
    CHECK(moved.theta == doctest::Approx(M_PI / 2).epsilon(1e-12));
    const RobotState still = step_true_state(s, 0.0, 0.0, 0.1, 0.0, 0.0);
    CHECK(still.theta == 0.7);
}

TEST_CASE("process noise with zero variance is exactly zero") {
    GaussianRng rng(1);
    NoiseSpec spec; // all zeros
    for (int i = 0; i < 100; ++i) {
        const ProcessNoise w = sample_process_noise(rng, spec);
        CHECK(w.wx == 0.0);
        CHECK(w.wy == 0.0);
    }
}

TEST_CASE("process noise sample statistics at var 1e-3") {
    GaussianRng rng(20240);
    NoiseSpec spec;
    spec.process_var_x = 1e-3;
    spec.process_var_y = 1e-3;
    const long draws = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < draws; ++i) {
        const ProcessNoise w = sample_process_noise(rng, spec);
        sum += w.wx;
        sumsq += w.wx * w.wx;
    }
    const double mean = sum / draws;
    const double var = sumsq / draws - mean * mean;
    CHECK(std::abs(mean) < 4.0 * std::sqrt(1e-3 / draws)); // CLT at 4 sigma
    CHECK(var == doctest::Approx(1e-3).epsilon(0.02));     // chi-square concentration
}

TEST_CASE("measurements with zero variance equal the true state") {
    GaussianRng rng(2);
    NoiseSpec spec;
    RobotState s;
    s.x = 0.2;
    s.y = -0.065;
    const Measurement z = measure(s, rng, spec);
    CHECK(z.z_odom_x == 0.2);
    CHECK(z.z_imu_x == 0.2);
    CHECK(z.z_odom_y == -0.065);
    CHECK(z.z_imu_y == -0.065);
}

TEST_CASE("odometry channel stays within 5 sigma nearly always") {
    GaussianRng rng(3);
    NoiseSpec spec;
    spec.meas_var_odom = 1e-6;
    spec.meas_var_imu = 1e-4;
    RobotState s;
    s.x = 0.2;
    const long draws = 100000;
    long outside = 0;
    for (long i = 0; i < draws; ++i) {
        const Measurement z = measure(s, rng, spec);
        if (std::abs(z.z_odom_x - 0.2) > 5e-3) ++outside;
    }
    // 5e-3 is 5 sigma at var 1e-6; expect < 0.01% outside.
    CHECK(outside <= draws / 10000);
}

TEST_CASE("odometry and IMU channels are uncorrelated") {
    GaussianRng rng(4);
    NoiseSpec spec;
    spec.meas_var_odom = 1e-6;
    spec.meas_var_imu = 1e-4;
    RobotState s;
    const long draws = 1000000;
    double so = 0.0, si = 0.0, soo = 0.0, sii = 0.0, soi = 0.0;
    for (long i = 0; i < draws; ++i) {
        const Measurement z = measure(s, rng, spec);
        so += z.z_odom_x;
        si += z.z_imu_x;
        soo += z.z_odom_x * z.z_odom_x;
        sii += z.z_imu_x * z.z_imu_x;
        soi += z.z_odom_x * z.z_imu_x;
    }
    const double mo = so / draws, mi = si / draws;
    const double vo = soo / draws - mo * mo;
    const double vi = sii / draws - mi * mi;
    const double cov = soi / draws - mo * mi;
    CHECK(std::abs(cov / std::sqrt(vo * vi)) < 0.01);
}

TEST_CASE("wheel conversion: zero command produces zero wheels") {
    DriveParams params;
    RobotState s;
    s.theta = 1.2;
    const WheelSpeeds w = unicycle_to_wheels(0.0, 0.0, s, params);
    CHECK(w.left == 0.0);
    CHECK(w.right == 0.0);
}

TEST_CASE("wheel conversion: command aligned with heading") {
    DriveParams params;
    RobotState s; // theta = 0
    const WheelSpeeds w = unicycle_to_wheels(0.1, 0.0, s, params);
    CHECK(w.left == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(w.right == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("wheel conversion clamps at the wheel speed limit") {
    DriveParams params; // limit 0.154
    RobotState s;
    const WheelSpeeds w = unicycle_to_wheels(1.0, 0.0, s, params);
    CHECK(w.left == doctest::Approx(0.154).epsilon(1e-12));
    CHECK(w.right == doctest::Approx(0.154).epsilon(1e-12));
}

TEST_CASE("wheel speeds never exceed the limit for random commands") {
    GaussianRng rng(5);
    DriveParams params;
    for (int trial = 0; trial < 1000; ++trial) {
        RobotState s;
        s.theta = (rng.uniform() - 0.5) * 2.0 * M_PI;
        const double ux = rng.normal() * 0.5;
        const double uy = rng.normal() * 0.5;
        const WheelSpeeds w = unicycle_to_wheels(ux, uy, s, params);
        CHECK(std::abs(w.left) <= params.wheel_speed_limit + 1e-15);
        CHECK(std::abs(w.right) <= params.wheel_speed_limit + 1e-15);
    }
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-3.5 * M_PI) == doctest::Approx(0.5 * M_PI));
    for (double t = -20.0; t < 20.0; t += 0.37) {
        const double w = wrap_angle(t);
        CHECK(w > -M_PI - 1e-12);
        CHECK(w <= M_PI + 1e-12);
        CHECK(std::abs(std::remainder(w - t, 2.0 * M_PI)) < 1e-9);
    }
}

TEST_CASE("noise and drive validation") {
    NoiseSpec bad;
    bad.meas_var_odom = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    DriveParams d;
    d.wheel_speed_limit = 0.0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}
