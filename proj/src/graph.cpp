#include "passync/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

namespace passync {

namespace {

void rebuild_csr(Network& net) {
    net.row_ptr.assign(net.m + 1, 0);
    net.col.clear();
    net.val.clear();
    net.a0.assign(net.m, 0.0);
    net.deg.assign(net.m, 0.0);
    std::vector<std::vector<std::pair<int, double>>> rows(net.m);
    for (const Edge& e : net.edges) {
        if (e.i < 1 || e.i > net.m || e.j < 0 || e.j > net.m)
            throw GraphError("edge endpoint out of range");
        if (e.w <= 0.0) throw GraphError("edge weights must be positive");
        if (e.j == e.i) throw GraphError("self-loops are not allowed");
        if (e.j == 0) {
            net.a0[e.i - 1] += e.w;
        } else {
            rows[e.i - 1].emplace_back(e.j - 1, e.w);
            net.deg[e.i - 1] += e.w;
        }
    }
    for (int i = 0; i < net.m; ++i) {
        std::sort(rows[i].begin(), rows[i].end());
        for (auto& [j, w] : rows[i]) {
            net.col.push_back(j);
            net.val.push_back(w);
        }
        net.row_ptr[i + 1] = static_cast<int>(net.col.size());
    }
}

// Edge labels of the arbitrary preset's removable "green" groups (follower, source).
const std::map<std::string, std::pair<int, int>> kArbitraryGroups = {
    {"I", {4, 2}}, {"II", {7, 5}}, {"III", {8, 7}}};

}  // namespace

void Network::amul(const double* x, double* y) const {
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
        y[i] = s;
    }
}

Mat Network::A_m_dense() const {
    Mat A(m);
    for (int i = 0; i < m; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) A(i, col[k]) += val[k];
    return A;
}

Mat Network::L_dense() const {
    Mat L = A_m_dense();
    for (auto& v : L.a) v = -v;
    for (int i = 0; i < m; ++i) L(i, i) += deg[i] + a0[i];
    return L;
}

Vec Network::row_sums() const {
    Vec s(m);
    for (int i = 0; i < m; ++i) s[i] = deg[i] + a0[i];
    return s;
}

double Network::balance_residual() const {
    double r = 0.0;
    for (int i = 0; i < m; ++i) r = std::max(r, std::abs(deg[i] + a0[i] - 1.0));
    return r;
}

Network make_network(int m, std::vector<Edge> edges) {
    if (m < 1) throw GraphError("m must be >= 1");
    Network net;
    net.m = m;
    net.edges = std::move(edges);
    rebuild_csr(net);
    return net;
}

Network build_preset(const TopologyPreset& preset) {
    const int m = preset.m;
    std::vector<Edge> edges;
    switch (preset.kind) {
        case Topology::Star:
            for (int i = 1; i <= m; ++i) edges.push_back({i, 0, 1.0});
            break;
        case Topology::Cyclic:
            for (int i = 1; i <= m; ++i) {
                edges.push_back({i, 0, 0.5});
                int prev = (i == 1) ? m : i - 1;
                int next = (i == m) ? 1 : i + 1;
                if (prev != i) edges.push_back({i, prev, 0.25});
                if (next != i && next != prev) edges.push_back({i, next, 0.25});
            }
            break;
        case Topology::Series:
            edges.push_back({1, 0, 1.0});
            for (int i = 2; i <= m; ++i) edges.push_back({i, i - 1, 1.0});
            break;
        case Topology::Arbitrary: {
            if (m != 8) throw GraphError("ArbitraryRequiresEight");
            edges = {{1, 0, 1.0},  {2, 0, 0.75}, {2, 4, 0.25}, {3, 0, 1.0},
                     {4, 1, 0.5},  {4, 2, 0.5},  {5, 2, 0.25}, {5, 7, 0.75},
                     {6, 3, 0.75}, {6, 8, 0.25}, {7, 5, 0.5},  {7, 6, 0.45},
                     {7, 8, 0.05}, {8, 6, 0.5},  {8, 7, 0.5}};
            break;
        }
        case Topology::Custom:
            edges = preset.custom_edges;
            break;
        default:
            throw GraphError("UnknownPreset");
    }
    if (preset.leader_weight_override) {
        const double w = *preset.leader_weight_override;
        if (w < 0.0) throw GraphError("leader weight override must be >= 0");
        std::vector<Edge> out;
        for (Edge e : edges) {
            if (e.j == 0) {
                if (preset.partial_access >= 0 && e.i > preset.partial_access) continue;
                if (w == 0.0) continue;
                e.w = w;
            }
            out.push_back(e);
        }
        edges = std::move(out);
    } else if (preset.partial_access >= 0) {
        std::vector<Edge> out;
        for (const Edge& e : edges)
            if (e.j != 0 || e.i <= preset.partial_access) out.push_back(e);
        edges = std::move(out);
    }
    return make_network(m, std::move(edges));
}

Network normalize(const Network& net) {
    Network out = net;
    for (int i = 0; i < net.m; ++i) {
        double w = net.deg[i] + net.a0[i];
        if (w <= 0.0) throw GraphError("IsolatedFollower");
    }
    Vec w = net.row_sums();
    for (Edge& e : out.edges) e.w /= w[e.i - 1];
    rebuild_csr(out);
    out.normalized = true;
    return out;
}

Network remove_groups(const Network& net, const std::vector<std::string>& groups) {
    Network out = net;
    for (const std::string& g : groups) {
        auto it = kArbitraryGroups.find(g);
        if (it == kArbitraryGroups.end()) throw GraphError("unknown removal group: " + g);
        auto [fi, fj] = it->second;
        std::erase_if(out.edges, [fi, fj](const Edge& e) { return e.i == fi && e.j == fj; });
    }
    bool was_normalized = out.normalized;
    rebuild_csr(out);
    out.normalized = was_normalized;  // deliberately not renormalized; balance may be violated
    return out;
}

Network build_scenario_network(const TopologyPreset& preset) {
    Network net = build_preset(preset);
    // Overridden leader weights deliberately break the balance condition; renormalizing
    // would cancel the experiment.
    if (!preset.leader_weight_override) net = normalize(net);
    if (!preset.removed_groups.empty()) net = remove_groups(net, preset.removed_groups);
    return net;
}

ConnectivityReport check_connectivity(const Network& net, double tol) {
    ConnectivityReport rep;
    rep.balance_residual = net.balance_residual();
    // BFS along information flow: leader -> followers, then j -> i for each edge (i, j).
    std::vector<std::vector<int>> out_adj(net.m + 1);
    for (const Edge& e : net.edges) out_adj[e.j].push_back(e.i);
    std::vector<char> seen(net.m + 1, 0);
    std::queue<int> q;
    seen[0] = 1;
    q.push(0);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : out_adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                q.push(v);
            }
    }
    rep.reachable = true;
    for (int i = 1; i <= net.m; ++i)
        if (!seen[i]) rep.reachable = false;
    auto eig = eigenvalues(net.L_dense());
    double mn = std::numeric_limits<double>::infinity();
    for (auto& l : eig) mn = std::min(mn, l.real());
    rep.min_re_eig = mn;
    rep.positive_stable = (mn > tol);
    return rep;
}

}  // namespace passync
