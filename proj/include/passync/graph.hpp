#pragma once
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "passync/linalg.hpp"

namespace passync {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Directed edge: follower i (1..m) receives from source j (0 = leader) with weight w.
struct Edge {
    int i = 0;
    int j = 0;
    double w = 0.0;
};

enum class Topology { Star, Cyclic, Series, Arbitrary, Custom };

struct TopologyPreset {
    Topology kind = Topology::Star;
    int m = 8;
    // Sweep experiments: replace every nonzero leader weight by this value (no renormalization).
    std::optional<double> leader_weight_override;
    // Partial leader access: only the first `partial_access` followers keep a leader link.
    int partial_access = -1;
    // Named removal groups of the Arbitrary preset ("I", "II", "III"), applied after normalization.
    std::vector<std::string> removed_groups;
    std::vector<Edge> custom_edges;
};

struct Network {
    int m = 0;
    std::vector<Edge> edges;
    // CSR of the follower adjacency A_m (row = receiving follower, 0-based).
    std::vector<int> row_ptr, col;
    std::vector<double> val;
    Vec a0;   // diagonal of A_0 (leader weights)
    Vec deg;  // follower in-degree sums d_i = sum_j A_m[i][j]
    bool normalized = false;

    void amul(const double* x, double* y) const;  // y = A_m x
    Mat A_m_dense() const;
    Mat L_dense() const;  // L = (D_m + A_0) - A_m; after normalization L = I - A_m
    Vec row_sums() const;                // (A_m + A_0) * 1
    double balance_residual() const;     // ||(A_m + A_0) * 1 - 1||_inf
};

struct ConnectivityReport {
    bool reachable = false;
    double min_re_eig = 0.0;
    bool positive_stable = false;
    double balance_residual = 0.0;
};

Network make_network(int m, std::vector<Edge> edges);
Network build_preset(const TopologyPreset& preset);
Network normalize(const Network& net);
Network remove_groups(const Network& net, const std::vector<std::string>& groups);
// build -> normalize (skipped when leader weights are overridden) -> removals.
Network build_scenario_network(const TopologyPreset& preset);
ConnectivityReport check_connectivity(const Network& net, double tol = 1e-10);

}  // namespace passync
