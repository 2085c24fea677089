#include "rendezvous/control.hpp"

#include <cmath>
#include <stdexcept>

namespace rendezvous {

namespace {

void require_symmetric_psd(const Eigen::MatrixXd& m, const char* name, bool strict) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string("weights: ") + name + " must be square");
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + m.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument(std::string("weights: ") + name + " must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (strict ? min_eig <= 0.0 : min_eig < -1e-9) {
        throw std::invalid_argument(std::string("weights: ") + name +
                                    (strict ? " must be positive definite"
                                            : " must be positive semidefinite"));
    }
}

} // namespace

void CostWeights::validate() const {
    if (horizon < 1) {
        throw std::invalid_argument("weights: horizon must be >= 1");
    }
    require_symmetric_psd(q_state, "q_state", false);
    require_symmetric_psd(q_terminal, "q_terminal", false);
    require_symmetric_psd(r_input, "r_input", true);
}

CostWeights CostWeights::scalar(double q, double r, double q_terminal, int horizon) {
    return uniform(q, r, q_terminal, horizon, 1);
}

CostWeights CostWeights::uniform(double q, double r, double q_terminal, int horizon, int n) {
    CostWeights w;
    w.q_state = q * Eigen::MatrixXd::Identity(n, n);
    w.r_input = r * Eigen::MatrixXd::Identity(n, n);
    w.q_terminal = q_terminal * Eigen::MatrixXd::Identity(n, n);
    w.horizon = horizon;
    return w;
}

const Eigen::MatrixXd& GainSchedule::gain_at(int k) const {
    if (k < 0 || gains.empty()) {
        throw std::out_of_range("gain schedule: bad step index");
    }
    return k < static_cast<int>(gains.size()) ? gains[k] : gains.front();
}

const Eigen::MatrixXd& GainSchedule::pi_at(int k) const {
    if (k < 0 || pi.empty()) {
        throw std::out_of_range("gain schedule: bad step index");
    }
    return k < static_cast<int>(pi.size()) ? pi[k] : pi.front();
}

GainSchedule riccati_backward(const CostWeights& weights,
                              const Eigen::MatrixXd& a_global,
                              const Eigen::MatrixXd& b_global) {
    weights.validate();
    const Eigen::Index n = a_global.rows();
    const Eigen::Index m = b_global.cols();
    if (a_global.cols() != n || b_global.rows() != n ||
        weights.q_state.rows() != n || weights.q_terminal.rows() != n ||
        weights.r_input.rows() != m) {
        throw std::invalid_argument("riccati: dimension mismatch between system and weights");
    }

    const int horizon = weights.horizon;
    GainSchedule schedule;
    schedule.pi.resize(horizon + 1);
    schedule.gains.resize(horizon);
    schedule.pi[horizon] = weights.q_terminal;

    for (int k = horizon - 1; k >= 0; --k) {
        const Eigen::MatrixXd& pi_next = schedule.pi[k + 1];
        const Eigen::MatrixXd s = weights.r_input + b_global.transpose() * pi_next * b_global;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
        if (ldlt.info() != Eigen::Success) {
            throw std::runtime_error("riccati: singular input-weight term");
        }
        const Eigen::MatrixXd gain = ldlt.solve(b_global.transpose() * pi_next * a_global);
        const Eigen::MatrixXd acl = a_global - b_global * gain;
        Eigen::MatrixXd pi = acl.transpose() * pi_next * acl +
                             gain.transpose() * weights.r_input * gain + weights.q_state;
        pi = 0.5 * (pi + pi.transpose());
        schedule.gains[k] = gain;
        schedule.pi[k] = std::move(pi);
    }
    return schedule;
}

GainSchedule local_riccati(const CostWeights& weights, double h) {
    if (weights.q_state.size() != 1 || weights.r_input.size() != 1 ||
        weights.q_terminal.size() != 1) {
        throw std::invalid_argument("local_riccati: weights must be scalar");
    }
    if (h < 0.0) {
        throw std::invalid_argument("local_riccati: sampling interval must be >= 0");
    }
    Eigen::MatrixXd a(1, 1), b(1, 1);
    a << 1.0;
    b << h;
    return riccati_backward(weights, a, b);
}

ControlInputs distributed_control(const GlobalEstimate& est, const Topology& topology,
                                  double gain, int k) {
    const Eigen::MatrixXd& a = topology.adjacency_at(k);
    if (a.rows() != est.xs.size()) {
        throw std::invalid_argument("distributed_control: estimate/topology size mismatch");
    }
    const Eigen::Index n = est.xs.size();
    ControlInputs u;
    u.ux = Eigen::VectorXd::Zero(n);
    u.uy = Eigen::VectorXd::Zero(n);
    // Pairwise form of -gain * L xhat: identical estimates cancel exactly.
    for (Eigen::Index i = 0; i < n; ++i) {
        double ax = 0.0, ay = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            ax += a(i, j) * (est.xs(i) - est.xs(j));
            ay += a(i, j) * (est.ys(i) - est.ys(j));
        }
        u.ux(i) = -gain * ax;
        u.uy(i) = -gain * ay;
    }
    return u;
}

ControlInputs distributed_control(const GlobalEstimate& est, const Topology& topology,
                                  const Eigen::MatrixXd& gain, int k) {
    if (gain.size() == 1) {
        return distributed_control(est, topology, gain(0, 0), k);
    }
    const Eigen::MatrixXd& l = laplacian(topology, k).entries;
    if (gain.cols() != est.xs.size() || l.rows() != est.xs.size()) {
        throw std::invalid_argument("distributed_control: gain/estimate size mismatch");
    }
    ControlInputs u;
    u.ux = -(l * (gain * est.xs));
    u.uy = -(l * (gain * est.ys));
    return u;
}

ControlInputs saturate_inputs(const ControlInputs& u, const DriveParams& params) {
    params.validate();
    ControlInputs out = u;
    for (Eigen::Index i = 0; i < u.ux.size(); ++i) {
        const double speed = std::hypot(u.ux(i), u.uy(i));
        if (speed > params.wheel_speed_limit) {
            const double scale = params.wheel_speed_limit / speed;
            out.ux(i) *= scale;
            out.uy(i) *= scale;
        }
    }
    return out;
}

} // namespace rendezvous
