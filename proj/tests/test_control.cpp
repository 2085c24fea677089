#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rendezvous/control.hpp"
#include "rendezvous/rng.hpp"

#include <cmath>

using namespace rendezvous;

TEST_CASE("scalar riccati hand example, M = 1") {
    const CostWeights w = CostWeights::scalar(1.0, 1.0, 1.0, 1);
    const GainSchedule sched = local_riccati(w, 0.1);
    REQUIRE(sched.gains.size() == 1);
    REQUIRE(sched.pi.size() == 2);
    const double l0 = 0.1 / 1.01;
    CHECK(sched.gains[0](0, 0) == doctest::Approx(l0).epsilon(1e-14));
    const double pi0 = (1.0 - 0.1 * l0) * (1.0 - 0.1 * l0) + l0 * l0 + 1.0;
    CHECK(sched.pi[0](0, 0) == doctest::Approx(pi0).epsilon(1e-14));
    CHECK(sched.pi[1](0, 0) == 1.0); // terminal weight
}

TEST_CASE("zero state and terminal weights give zero gains") {
    const CostWeights w = CostWeights::scalar(0.0, 1.0, 0.0, 4);
    const GainSchedule sched = local_riccati(w, 0.1);
    for (const auto& g : sched.gains) CHECK(g(0, 0) == 0.0);
    for (const auto& p : sched.pi) CHECK(p(0, 0) == 0.0);
}

TEST_CASE("M = 3 scalar gains match a least-squares minimization oracle") {
    // Deterministic plant x_{k+1} = x_k + b u_k; minimize
    // sum q x_k^2 + r u_k^2 + q_M x_M^2 directly over (u_0, u_1, u_2).
    const double b = 0.1, q = 1.0, r = 0.5, q_m = 2.0, x0 = 1.0;
    const CostWeights w = CostWeights::scalar(q, r, q_m, 3);
    const GainSchedule sched = local_riccati(w, b);

    // Closed-loop cost under the synthesized gains.
    double x = x0, j_synth = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double u = -sched.gains[k](0, 0) * x;
        j_synth += q * x * x + r * u * u;
        x += b * u;
    }
    j_synth += q_m * x * x;

    // Oracle: normal equations for the open-loop input vector.
    Eigen::Matrix3d hess;
    Eigen::Vector3d grad;
    Eigen::Vector4d phi(1.0, 1.0, 1.0, 1.0); // a = 1
    Eigen::Matrix<double, 4, 3> t = Eigen::Matrix<double, 4, 3>::Zero();
    for (int k = 0; k <= 3; ++k) {
        for (int j = 0; j < k; ++j) t(k, j) = b;
    }
    Eigen::Vector4d qd(q, q, q, q_m);
    hess = t.transpose() * qd.asDiagonal() * t + r * Eigen::Matrix3d::Identity();
    grad = t.transpose() * qd.asDiagonal() * (phi * x0);
    const Eigen::Vector3d u_star = hess.ldlt().solve(-grad);
    const Eigen::Vector4d x_star = phi * x0 + t * u_star;
    const double j_star = x_star.dot(qd.asDiagonal() * x_star) + r * u_star.squaredNorm();

    CHECK(std::abs(j_synth - j_star) <= 1e-8);
}

TEST_CASE("global 1x1 riccati is bitwise identical to the scalar recursion") {
    const CostWeights w = CostWeights::scalar(1.3, 0.7, 2.1, 5);
    Eigen::MatrixXd a(1, 1), b(1, 1);
    a << 1.0;
    b << 0.1;
    const GainSchedule global = riccati_backward(w, a, b);
    const GainSchedule local = local_riccati(w, 0.1);
    for (std::size_t k = 0; k < global.gains.size(); ++k) {
        CHECK(global.gains[k](0, 0) == local.gains[k](0, 0));
    }
    for (std::size_t k = 0; k < global.pi.size(); ++k) {
        CHECK(global.pi[k](0, 0) == local.pi[k](0, 0));
    }
}

TEST_CASE("zero input gain (h = 0) gives zero control gains") {
    const CostWeights w = CostWeights::scalar(1.0, 1.0, 1.0, 4);
    const GainSchedule sched = local_riccati(w, 0.0);
    for (const auto& g : sched.gains) CHECK(g(0, 0) == 0.0);
}

TEST_CASE("long-horizon gains converge backward to a constant") {
    const CostWeights w = CostWeights::scalar(1.0, 1.0, 1.0, 500);
    const GainSchedule sched = local_riccati(w, 0.1);
    const double l_inf = sched.gains[0](0, 0);
    // The backward recursion contracts by ~0.82 per step away from the
    // terminal condition, so the residual at k = 399 is still a few 1e-9;
    // it falls below 1e-10 from k = 350 down and hits exact convergence
    // (to double precision) near k = 300.
    for (int k = 0; k < 400; ++k) {
        CHECK(std::abs(sched.gains[k](0, 0) - l_inf) < 1e-8);
    }
    for (int k = 0; k < 350; ++k) {
        CHECK(std::abs(sched.gains[k](0, 0) - l_inf) < 1e-10);
    }
    // Known stationary values for q = r = 1, b = 0.1.
    CHECK(sched.pi[0](0, 0) == doctest::Approx(10.51249219725).epsilon(1e-9));
    CHECK(l_inf == doctest::Approx(0.9512492197).epsilon(1e-8));
}

TEST_CASE("gain_at clamps past the horizon by holding the stationary gain") {
    const CostWeights w = CostWeights::scalar(1.0, 1.0, 1.0, 3);
    const GainSchedule sched = local_riccati(w, 0.1);
    CHECK(&sched.gain_at(0) == &sched.gains[0]);
    CHECK(&sched.gain_at(2) == &sched.gains[2]);
    CHECK(sched.gain_at(3)(0, 0) == sched.gains[0](0, 0));
    CHECK(sched.gain_at(99)(0, 0) == sched.gains[0](0, 0));
    CHECK(sched.pi_at(99)(0, 0) == sched.pi[0](0, 0));
}

TEST_CASE("cost-to-go is monotone in the state weight") {
    const GainSchedule lo = local_riccati(CostWeights::scalar(0.5, 1.0, 1.0, 10), 0.1);
    const GainSchedule hi = local_riccati(CostWeights::scalar(2.0, 1.0, 1.0, 10), 0.1);
    for (std::size_t k = 0; k < lo.pi.size() - 1; ++k) {
        CHECK(hi.pi[k](0, 0) > lo.pi[k](0, 0));
    }
}

TEST_CASE("distributed control: consensus is an equilibrium") {
    GlobalEstimate est;
    est.xs = Eigen::VectorXd::Constant(4, 0.3);
    est.ys = Eigen::VectorXd::Constant(4, -0.1);
    const ControlInputs u = distributed_control(est, Topology::complete(4), 0.7, 0);
    CHECK(u.ux.cwiseAbs().maxCoeff() == 0.0);
    CHECK(u.uy.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("distributed control hand example: N = 2, gain 0.5") {
    GlobalEstimate est;
    est.xs = Eigen::VectorXd(2);
    est.xs << 1.0, 0.0;
    est.ys = Eigen::VectorXd::Zero(2);
    const ControlInputs u = distributed_control(est, Topology::complete(2), 0.5, 0);
    CHECK(u.ux(0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(u.ux(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("inputs sum to zero on a symmetric topology") {
    GlobalEstimate est;
    est.xs = Eigen::VectorXd(4);
    est.xs << 0.2, -0.2, -0.2, 0.2;
    est.ys = Eigen::VectorXd(4);
    est.ys << -0.065, -0.065, 0.065, 0.065;
    for (double gain : {0.1, 0.951, 2.0}) {
        const ControlInputs u = distributed_control(est, Topology::complete(4), gain, 0);
        CHECK(std::abs(u.ux.sum()) < 1e-15);
        CHECK(std::abs(u.uy.sum()) < 1e-15);
        // u = -g (L xhat)
        const Eigen::VectorXd expected =
            -gain * (laplacian(Topology::complete(4)).entries * est.xs);
        CHECK((u.ux - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("matrix-gain overload with a 1x1 gain matches the scalar path") {
    GlobalEstimate est;
    est.xs = Eigen::VectorXd(3);
    est.xs << 0.3, -0.1, 0.05;
    est.ys = Eigen::VectorXd(3);
    est.ys << 0.0, 0.2, -0.2;
    Eigen::MatrixXd g(1, 1);
    g << 0.8;
    const ControlInputs a = distributed_control(est, Topology::ring(3), g, 0);
    const ControlInputs b = distributed_control(est, Topology::ring(3), 0.8, 0);
    CHECK((a.ux - b.ux).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.uy - b.uy).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("saturation preserves direction and clamps the norm") {
    DriveParams params; // limit 0.154
    ControlInputs u;
    u.ux = Eigen::VectorXd(3);
    u.uy = Eigen::VectorXd(3);
    u.ux << 0.03, 0.3, 0.0;
    u.uy << 0.04, 0.4, 0.0;
    const ControlInputs s = saturate_inputs(u, params);

    // ||(0.03, 0.04)|| = 0.05 < limit: unchanged.
    CHECK(s.ux(0) == 0.03);
    CHECK(s.uy(0) == 0.04);

    // ||(0.3, 0.4)|| = 0.5: rescaled by 0.154/0.5 = 0.308.
    CHECK(s.ux(1) == doctest::Approx(0.3 * 0.308).epsilon(1e-12));
    CHECK(s.uy(1) == doctest::Approx(0.4 * 0.308).epsilon(1e-12));
    CHECK(std::hypot(s.ux(1), s.uy(1)) == doctest::Approx(0.154).epsilon(1e-12));

    // Zero stays zero.
    CHECK(s.ux(2) == 0.0);
    CHECK(s.uy(2) == 0.0);
}

TEST_CASE("cost weights validation") {
    CHECK_THROWS_AS(CostWeights::scalar(1.0, 0.0, 1.0, 3).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(CostWeights::scalar(-1.0, 1.0, 1.0, 3).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(CostWeights::scalar(1.0, 1.0, 1.0, 0).validate(),
                    std::invalid_argument);
    CHECK_NOTHROW(CostWeights::uniform(1.0, 1.0, 1.0, 3, 4).validate());
}
