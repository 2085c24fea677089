// Backward Riccati recursion and optimal gain synthesis, in global stacked
// form and in the per-robot scalar form, plus the distributed
// neighbor-difference control law and input saturation.

#ifndef RENDEZVOUS_CONTROL_HPP
#define RENDEZVOUS_CONTROL_HPP

#include "rendezvous/dynamics.hpp"
#include "rendezvous/estimation.hpp"
#include "rendezvous/graph.hpp"

#include <Eigen/Dense>
#include <vector>

namespace rendezvous {

struct CostWeights {
    Eigen::MatrixXd q_state;    // symmetric PSD
    Eigen::MatrixXd r_input;    // symmetric PD
    Eigen::MatrixXd q_terminal; // symmetric PSD
    int horizon = 1;            // M >= 1

    void validate() const;

    // Scalar weights, the per-robot local problem.
    static CostWeights scalar(double q, double r, double q_terminal, int horizon);
    // Scalar weights expanded to q * I_n for the stacked global problem.
    static CostWeights uniform(double q, double r, double q_terminal, int horizon, int n);
};

// Backward sequences Pi_0..Pi_M (cost-to-go) and L_0..L_M-1 (gains),
// indexed by step. gain_at clamps past the horizon by holding L_0, the
// backward-converged stationary gain.
struct GainSchedule {
    std::vector<Eigen::MatrixXd> pi;    // size M+1
    std::vector<Eigen::MatrixXd> gains; // size M

    const Eigen::MatrixXd& gain_at(int k) const;
    const Eigen::MatrixXd& pi_at(int k) const;
    bool is_scalar() const { return !gains.empty() && gains.front().size() == 1; }
};

GainSchedule riccati_backward(const CostWeights& weights,
                              const Eigen::MatrixXd& a_global,
                              const Eigen::MatrixXd& b_global);

// Scalar specialization with a = 1, b = h (the per-robot update each agent runs).
GainSchedule local_riccati(const CostWeights& weights, double h);

struct ControlInputs {
    Eigen::VectorXd ux;
    Eigen::VectorXd uy;
};

// Scalar-gain mode: u_i = -gain * sum_j a_ij(k) (xhat_i - xhat_j).
ControlInputs distributed_control(const GlobalEstimate& est, const Topology& topology,
                                  double gain, int k);

// Matrix-gain mode: u = -L(k) L_k xhat, the Laplacian routing the stacked
// gain's output to per-robot velocity inputs.
ControlInputs distributed_control(const GlobalEstimate& est, const Topology& topology,
                                  const Eigen::MatrixXd& gain, int k);

// Scales each planar velocity down (direction preserved) so its norm does
// not exceed the wheel speed limit.
ControlInputs saturate_inputs(const ControlInputs& u, const DriveParams& params);

} // namespace rendezvous

#endif
