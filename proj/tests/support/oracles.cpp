#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

namespace glemb::test {

Graph make_graph(std::size_t n, std::span<const std::pair<int, int>> edges) {
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (auto [u, v] : edges) pairs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    return Graph(std::move(names), pairs);
}

Graph make_graph(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
    return make_graph(n, std::span<const std::pair<int, int>>(edges.begin(), edges.size()));
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    return make_graph(n, edges);
}

Eigen::MatrixXd dense_adjacency(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = 1.0;
    return a;
}

namespace {

bool connected(const std::vector<int>& nodes, const Graph& g) {
    std::vector<char> seen(nodes.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (!seen[j] && g.adjacent(static_cast<NodeId>(nodes[i]), static_cast<NodeId>(nodes[j]))) {
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
        }
    }
    return reached == nodes.size();
}

// Graphlet id and per-node orbit from edge count and induced degrees.
std::pair<int, std::vector<int>> classify(const std::vector<int>& nodes, const Graph& g) {
    const std::size_t k = nodes.size();
    std::vector<int> deg(k, 0);
    int edges = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (g.adjacent(static_cast<NodeId>(nodes[i]), static_cast<NodeId>(nodes[j]))) {
                ++deg[i];
                ++deg[j];
                ++edges;
            }
    std::vector<int> orbit(k);
    const int max_deg = *std::max_element(deg.begin(), deg.end());
    if (k == 2) return {0, {0, 0}};
    if (k == 3) {
        if (edges == 3) return {2, {3, 3, 3}};
        for (std::size_t i = 0; i < k; ++i) orbit[i] = deg[i] == 2 ? 2 : 1;
        return {1, orbit};
    }
    int id = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const int d = deg[i];
        switch (edges) {
        case 3:
            if (max_deg == 3) { id = 4; orbit[i] = d == 3 ? 7 : 6; }
            else { id = 3; orbit[i] = d == 1 ? 4 : 5; }
            break;
        case 4:
            if (max_deg == 2) { id = 5; orbit[i] = 8; }
            else { id = 6; orbit[i] = d == 1 ? 9 : d == 2 ? 10 : 11; }
            break;
        case 5: id = 7; orbit[i] = d == 2 ? 12 : 13; break;
        default: id = 8; orbit[i] = 14; break;
        }
    }
    return {id, orbit};
}

} // namespace

BruteGraphlets brute_force_graphlets(const Graph& g) {
    const int n = static_cast<int>(g.node_count());
    BruteGraphlets out;
    out.orbits.assign(static_cast<std::size_t>(n), {});
    for (auto& m : out.adjacency) m = Eigen::MatrixXd::Zero(n, n);
    auto visit = [&](const std::vector<int>& nodes) {
        if (!connected(nodes, g)) return;
        auto [id, orbit] = classify(nodes, g);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            ++out.orbits[static_cast<std::size_t>(nodes[i])][static_cast<std::size_t>(orbit[i])];
            for (std::size_t j = 0; j < nodes.size(); ++j)
                if (i != j) out.adjacency[static_cast<std::size_t>(id)](nodes[i], nodes[j]) += 1.0;
        }
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            visit({a, b});
            for (int c = b + 1; c < n; ++c) {
                visit({a, b, c});
                for (int d = c + 1; d < n; ++d) visit({a, b, c, d});
            }
        }
    return out;
}

Eigen::MatrixXd deepwalk_oracle(const Eigen::MatrixXd& a, int walk_length) {
    const Eigen::Index n = a.rows();
    const Eigen::VectorXd deg = a.rowwise().sum();
    const double vol = deg.sum();
    Eigen::MatrixXd dinv = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (deg(i) > 0) dinv(i, i) = 1.0 / deg(i);
    const Eigen::MatrixXd p = dinv * a;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    for (int r = 1; r <= walk_length; ++r) {
        power = power * p;
        sum += power;
    }
    const Eigen::MatrixXd m = (vol / walk_length) * sum * dinv;
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(i, j) > 0.0 ? std::max(0.0, std::log(m(i, j))) : 0.0;
    return out;
}

Eigen::MatrixXd ppmi_oracle(const Eigen::MatrixXd& a) {
    const Eigen::VectorXd deg = a.rowwise().sum();
    const double vol = deg.sum();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) > 0.0) out(i, j) = std::max(0.0, std::log(vol * a(i, j) / (deg(i) * deg(j))));
    return out;
}

double hypergeom_enumeration(std::size_t n, std::size_t x, std::size_t m, std::size_t k) {
    // items 0..k-1 are hits
    std::uint64_t total = 0, tail = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
        ++total;
        const auto hits = static_cast<std::size_t>(std::popcount(mask & ((1u << k) - 1u)));
        if (hits >= x) ++tail;
    }
    return static_cast<double>(tail) / static_cast<double>(total);
}

double mann_whitney_enumeration(std::span<const double> a, std::span<const double> b) {
    const std::size_t n1 = a.size(), n = a.size() + b.size();
    std::vector<std::pair<double, int>> all;
    for (double v : a) all.emplace_back(v, 0);
    for (double v : b) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end());
    auto u_of = [&](std::uint32_t mask) {
        double ranks = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) ranks += static_cast<double>(i + 1);
        return ranks - static_cast<double>(n1 * (n1 + 1)) / 2.0;
    };
    std::uint32_t observed = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (all[i].second == 0) observed |= 1u << i;
    const double u = u_of(observed);
    double total = 0, lower = 0, upper = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != n1) continue;
        const double v = u_of(mask);
        ++total;
        if (v <= u) ++lower;
        if (v >= u) ++upper;
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

} // namespace glemb::test
