// Communication topology: adjacency matrices, graph Laplacians and the
// Kronecker products used to assemble stacked system matrices.

#ifndef RENDEZVOUS_GRAPH_HPP
#define RENDEZVOUS_GRAPH_HPP

#include <Eigen/Dense>
#include <map>
#include <string>

namespace rendezvous {

// Weighted digraph over n robots. `schedule` optionally maps a step index
// to an alternative adjacency (time-varying links); steps not present fall
// back to the base adjacency.
struct Topology {
    int n = 0;
    Eigen::MatrixXd adjacency;
    std::map<int, Eigen::MatrixXd> schedule;

    // Throws std::invalid_argument on negative weights, nonzero diagonal,
    // or a schedule entry of the wrong dimension.
    void validate() const;

    const Eigen::MatrixXd& adjacency_at(int k) const;

    static Topology complete(int n);
    static Topology ring(int n);
    static Topology path(int n);
    static Topology from_preset(const std::string& name, int n);
};

// Laplacian with the row-sum-zero structure l_ii = sum_j a_ij, l_ij = -a_ij.
struct LaplacianMatrix {
    Eigen::MatrixXd entries;
};

LaplacianMatrix laplacian(const Topology& topology, int k = 0);

// Connectivity of the undirected support of the adjacency.
bool is_connected(const Topology& topology);

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace rendezvous

#endif
