#include "rendezvous/graph.hpp"

#include <stdexcept>
#include <vector>

namespace rendezvous {

void Topology::validate() const {
    if (n < 1) {
        throw std::invalid_argument("topology: robot count must be >= 1");
    }
    auto check = [this](const Eigen::MatrixXd& a, const char* what) {
        if (a.rows() != n || a.cols() != n) {
            throw std::invalid_argument(std::string("topology: ") + what +
                                        " dimension does not match robot count");
        }
        for (int i = 0; i < n; ++i) {
            if (a(i, i) != 0.0) {
                throw std::invalid_argument("topology: adjacency diagonal must be zero");
            }
            for (int j = 0; j < n; ++j) {
                if (a(i, j) < 0.0) {
                    throw std::invalid_argument("topology: adjacency weights must be nonnegative");
                }
            }
        }
    };
    check(adjacency, "adjacency");
    for (const auto& [k, a] : schedule) {
        check(a, "schedule entry");
    }
}

const Eigen::MatrixXd& Topology::adjacency_at(int k) const {
    auto it = schedule.find(k);
    return it != schedule.end() ? it->second : adjacency;
}

Topology Topology::complete(int n) {
    Topology t;
    t.n = n;
    t.adjacency = Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
    return t;
}

Topology Topology::ring(int n) {
    Topology t;
    t.n = n;
    t.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        t.adjacency(i, j) = 1.0;
        t.adjacency(j, i) = 1.0;
    }
    return t;
}

Topology Topology::path(int n) {
    Topology t;
    t.n = n;
    t.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        t.adjacency(i, i + 1) = 1.0;
        t.adjacency(i + 1, i) = 1.0;
    }
    return t;
}

Topology Topology::from_preset(const std::string& name, int n) {
    if (name == "complete") return complete(n);
    if (name == "ring") return ring(n);
    if (name == "path") return path(n);
    throw std::invalid_argument("topology: unknown preset '" + name + "'");
}

LaplacianMatrix laplacian(const Topology& topology, int k) {
    topology.validate();
    const Eigen::MatrixXd& a = topology.adjacency_at(k);
    Eigen::MatrixXd l = -a;
    for (int i = 0; i < topology.n; ++i) {
        l(i, i) = a.row(i).sum();
    }
    return LaplacianMatrix{std::move(l)};
}

bool is_connected(const Topology& topology) {
    topology.validate();
    const int n = topology.n;
    if (n == 1) return true;
    // BFS over the undirected support of the base adjacency.
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (!seen[j] && (topology.adjacency(i, j) > 0.0 || topology.adjacency(j, i) > 0.0)) {
                seen[j] = true;
                ++reached;
                stack.push_back(j);
            }
        }
    }
    return reached == n;
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.size() == 0 || b.size() == 0) {
        throw std::invalid_argument("kronecker: operands must be non-empty");
    }
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace rendezvous
