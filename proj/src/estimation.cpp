#include "rendezvous/estimation.hpp"

#include <cmath>

namespace rendezvous {

AxisFilter AxisFilter::make(double initial_estimate, double initial_covariance,
                            double h, double process_var,
                            const Eigen::VectorXd& meas_vars) {
    if (initial_covariance < 0.0) {
        throw std::invalid_argument("filter: initial covariance must be >= 0");
    }
    if (process_var < 0.0 || (meas_vars.array() < 0.0).any()) {
        throw std::invalid_argument("filter: variances must be >= 0");
    }
    if (meas_vars.size() < 1) {
        throw std::invalid_argument("filter: at least one measurement channel required");
    }
    AxisFilter f;
    f.estimate = initial_estimate;
    f.covariance = initial_covariance;
    f.a = 1.0;
    f.b = h;
    f.process_var = process_var;
    f.meas_vars = meas_vars;
    f.last_gain = Eigen::VectorXd::Zero(meas_vars.size());
    return f;
}

AxisFilter kf_predict(const AxisFilter& filter, double u, double h) {
    AxisFilter out = filter;
    out.estimate = filter.a * filter.estimate + h * u;
    out.covariance = filter.a * filter.a * filter.covariance + filter.process_var;
    return out;
}

AxisFilter kf_update(const AxisFilter& filter, const Eigen::VectorXd& z) {
    const Eigen::Index c = filter.meas_vars.size();
    if (z.size() != c || c < 1) {
        throw std::invalid_argument("kf_update: measurement channel mismatch");
    }
    const double p = filter.covariance;
    // S = H P H^T + R with H = ones(c, 1)
    Eigen::MatrixXd s = Eigen::MatrixXd::Constant(c, c, p);
    s.diagonal() += filter.meas_vars;

    AxisFilter out = filter;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
    if (!lu.isInvertible()) {
        const double spread = z.maxCoeff() - z.minCoeff();
        if (spread > 1e-12) {
            throw SingularInnovationError(
                "kf_update: singular innovation covariance with conflicting channels");
        }
        // Exact, noise-free measurement: collapse onto it.
        out.estimate = z.mean();
        out.covariance = 0.0;
        out.last_gain = Eigen::VectorXd::Constant(c, 1.0 / static_cast<double>(c));
        return out;
    }

    const Eigen::MatrixXd s_inv = lu.inverse();
    const Eigen::RowVectorXd gain = p * s_inv.colwise().sum(); // p * ones^T S^-1
    const Eigen::VectorXd innovation = z - Eigen::VectorXd::Constant(c, filter.estimate);
    out.estimate = filter.estimate + gain.dot(innovation);
    out.covariance = (1.0 - gain.sum()) * p;
    if (out.covariance < 0.0) out.covariance = 0.0; // guard against roundoff
    out.last_gain = gain.transpose();
    return out;
}

double steady_state_covariance(double process_var, double meas_var_effective) {
    if (process_var < 0.0 || meas_var_effective <= 0.0) {
        throw std::invalid_argument("steady_state_covariance: need q >= 0 and r > 0");
    }
    const double q = process_var;
    const double r = meas_var_effective;
    return 0.5 * (-q + std::sqrt(q * q + 4.0 * q * r));
}

double effective_meas_var(const Eigen::VectorXd& meas_vars) {
    double info = 0.0;
    for (Eigen::Index i = 0; i < meas_vars.size(); ++i) {
        if (meas_vars(i) <= 0.0) return 0.0;
        info += 1.0 / meas_vars(i);
    }
    return 1.0 / info;
}

GlobalEstimate stack(const std::vector<std::pair<AxisFilter, AxisFilter>>& filters) {
    const Eigen::Index n = static_cast<Eigen::Index>(filters.size());
    GlobalEstimate g;
    g.xs.resize(n);
    g.ys.resize(n);
    g.covariances.reserve(filters.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        g.xs(i) = filters[i].first.estimate;
        g.ys(i) = filters[i].second.estimate;
        g.covariances.emplace_back(filters[i].first.covariance,
                                   filters[i].second.covariance);
    }
    return g;
}

} // namespace rendezvous
