#include "glemb/graphlets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "glemb/error.hpp"
#include "glemb/parallel.hpp"

namespace glemb {

namespace {

struct Shape {
    int graphlet;
    std::array<int, 4> orbit;
};

Shape classify(const Graph& g, std::span<const NodeId> nodes) {
    const std::size_t k = nodes.size();
    std::array<int, 4> deg{};
    int edges = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (g.adjacent(nodes[i], nodes[j])) {
                ++deg[i];
                ++deg[j];
                ++edges;
            }
    Shape s{};
    if (k == 2) {
        s.graphlet = 0;
        s.orbit = {0, 0, 0, 0};
        return s;
    }
    if (k == 3) {
        if (edges == 3) {
            s.graphlet = 2;
            s.orbit = {3, 3, 3, 0};
        } else {
            s.graphlet = 1;
            for (std::size_t i = 0; i < 3; ++i) s.orbit[i] = deg[i] == 2 ? 2 : 1;
        }
        return s;
    }
    const int max_deg = *std::max_element(deg.begin(), deg.end());
    switch (edges) {
    case 3:
        if (max_deg == 3) {
            s.graphlet = 4;
            for (int i = 0; i < 4; ++i) s.orbit[i] = deg[i] == 3 ? 7 : 6;
        } else {
            s.graphlet = 3;
            for (int i = 0; i < 4; ++i) s.orbit[i] = deg[i] == 1 ? 4 : 5;
        }
        break;
    case 4:
        if (max_deg == 2) {
            s.graphlet = 5;
            s.orbit = {8, 8, 8, 8};
        } else {
            s.graphlet = 6;
            for (int i = 0; i < 4; ++i) s.orbit[i] = deg[i] == 1 ? 9 : (deg[i] == 2 ? 10 : 11);
        }
        break;
    case 5:
        s.graphlet = 7;
        for (int i = 0; i < 4; ++i) s.orbit[i] = deg[i] == 2 ? 12 : 13;
        break;
    default:
        s.graphlet = 8;
        s.orbit = {14, 14, 14, 14};
        break;
    }
    return s;
}

// ESU enumeration of connected induced subgraphs rooted at their smallest node.
template <typename Emit>
class Esu {
public:
    Esu(const Graph& g, int max_size, Emit& emit) : g_(g), max_(max_size), emit_(emit) {}

    void root(NodeId v) {
        sub_[0] = v;
        auto& ext = pool_[0];
        ext.clear();
        for (NodeId u : g_.neighbors(v))
            if (u > v) ext.push_back(u);
        extend(1, ext);
    }

private:
    bool in_closed_neighborhood(NodeId u, int depth) const {
        for (int i = 0; i < depth; ++i)
            if (sub_[i] == u || g_.adjacent(sub_[i], u)) return true;
        return false;
    }

    void extend(int depth, std::vector<NodeId>& ext) {
        if (depth >= 2) {
            std::span<const NodeId> nodes(sub_.data(), static_cast<std::size_t>(depth));
            Shape s = classify(g_, nodes);
            emit_(nodes, s.graphlet, std::span<const int>(s.orbit.data(), nodes.size()));
        }
        if (depth == max_) return;
        auto& next = pool_[depth];
        while (!ext.empty()) {
            NodeId w = ext.back();
            ext.pop_back();
            next.assign(ext.begin(), ext.end());
            for (NodeId u : g_.neighbors(w)) {
                if (u <= sub_[0] || u == w) continue;
                if (in_closed_neighborhood(u, depth)) continue;
                next.push_back(u);
            }
            sub_[depth] = w;
            extend(depth + 1, next);
        }
    }

    const Graph& g_;
    int max_;
    Emit& emit_;
    std::array<NodeId, 4> sub_{};
    std::array<std::vector<NodeId>, 4> pool_;
};

template <typename Emit>
void enumerate_roots(const Graph& g, int max_size, std::size_t begin, std::size_t end, Emit& emit) {
    Esu<Emit> esu(g, max_size, emit);
    for (std::size_t v = begin; v < end; ++v) esu.root(static_cast<NodeId>(v));
}

constexpr std::size_t kRootChunk = 64;

inline std::uint64_t pair_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

using PairCounts = std::unordered_map<std::uint64_t, std::int64_t>;

CountMatrix to_count_matrix(std::size_t n, std::vector<PairCounts>& parts) {
    PairCounts merged = std::move(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i)
        for (const auto& [k, c] : parts[i]) merged[k] += c;
    std::vector<std::tuple<NodeId, NodeId, std::int64_t>> upper;
    upper.reserve(merged.size());
    for (const auto& [k, c] : merged)
        upper.emplace_back(static_cast<NodeId>(k >> 32), static_cast<NodeId>(k & 0xffffffffu), c);
    return CountMatrix(n, std::move(upper));
}

void check_graphlet(int k) {
    if (k < 0 || k >= kGraphletCount) fail(ErrorCode::InvalidArgument, "unknown graphlet id " + std::to_string(k));
}

} // namespace

ReducedGdv Gdv::reduced(NodeId u) const noexcept {
    ReducedGdv r{};
    for (int i = 0; i < kReducedOrbitCount; ++i) r[i] = counts[u][kNonRedundantOrbits[i]];
    return r;
}

OrbitWeights OrbitWeights::uniform() {
    OrbitWeights w;
    w.w.fill(1.0);
    return w;
}

OrbitWeights OrbitWeights::dependency() {
    // Dependency counts for orbits 0..14 of the 73-orbit table.
    static constexpr std::array<int, kOrbitCount> o = {1, 2, 2, 2, 3, 4, 3, 3, 4, 3, 4, 4, 4, 4, 3};
    OrbitWeights w;
    for (int i = 0; i < kReducedOrbitCount; ++i)
        w.w[i] = 1.0 - std::log(static_cast<double>(o[kNonRedundantOrbits[i]])) / std::log(73.0);
    return w;
}

double OrbitWeights::sum() const noexcept { return std::accumulate(w.begin(), w.end(), 0.0); }

void OrbitWeights::validate() const {
    for (double x : w)
        if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::InvalidArgument, "orbit weights must be positive");
}

CountMatrix::CountMatrix(std::size_t n, std::vector<std::tuple<NodeId, NodeId, std::int64_t>> upper) {
    std::vector<std::tuple<NodeId, NodeId, std::int64_t>> all;
    all.reserve(upper.size() * 2);
    for (auto [u, v, c] : upper) {
        if (u == v || c == 0) continue;
        if (u >= n || v >= n) fail(ErrorCode::InvalidArgument, "count entry out of range");
        all.emplace_back(u, v, c);
        all.emplace_back(v, u, c);
    }
    std::sort(all.begin(), all.end());
    row_ptr_.assign(n + 1, 0);
    cols_.reserve(all.size());
    vals_.reserve(all.size());
    for (auto [u, v, c] : all) {
        ++row_ptr_[u + 1];
        cols_.push_back(v);
        vals_.push_back(c);
    }
    for (std::size_t i = 0; i < n; ++i) row_ptr_[i + 1] += row_ptr_[i];
    // Sum duplicate (u, v) entries in place.
    std::vector<std::size_t> new_ptr(n + 1, 0);
    std::size_t out = 0;
    for (std::size_t u = 0; u < n; ++u) {
        new_ptr[u] = out;
        for (std::size_t p = row_ptr_[u]; p < row_ptr_[u + 1]; ++p) {
            if (out > new_ptr[u] && cols_[out - 1] == cols_[p]) {
                vals_[out - 1] += vals_[p];
            } else {
                cols_[out] = cols_[p];
                vals_[out] = vals_[p];
                ++out;
            }
        }
    }
    new_ptr[n] = out;
    cols_.resize(out);
    vals_.resize(out);
    row_ptr_ = std::move(new_ptr);
}

std::int64_t CountMatrix::at(NodeId u, NodeId v) const noexcept {
    auto cols = row_cols(u);
    auto it = std::lower_bound(cols.begin(), cols.end(), v);
    if (it == cols.end() || *it != v) return 0;
    return vals_[row_ptr_[u] + static_cast<std::size_t>(it - cols.begin())];
}

std::int64_t CountMatrix::row_sum(NodeId u) const noexcept {
    auto vals = row_vals(u);
    return std::accumulate(vals.begin(), vals.end(), std::int64_t{0});
}

std::int64_t CountMatrix::total() const noexcept { return std::accumulate(vals_.begin(), vals_.end(), std::int64_t{0}); }

CountMatrix CountMatrix::binarized() const {
    CountMatrix b = *this;
    std::fill(b.vals_.begin(), b.vals_.end(), 1);
    return b;
}

Eigen::MatrixXd CountMatrix::to_dense() const {
    const std::size_t n = size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t p = row_ptr_[u]; p < row_ptr_[u + 1]; ++p)
            m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(cols_[p])) = static_cast<double>(vals_[p]);
    return m;
}

void enumerate_graphlets(const Graph& g, int max_size, const SubgraphVisitor& fn) {
    if (max_size < 2 || max_size > 4) fail(ErrorCode::InvalidArgument, "graphlet size must be in [2, 4]");
    auto emit = [&](std::span<const NodeId> nodes, int graphlet, std::span<const int> orbits) {
        fn(nodes, graphlet, orbits);
    };
    enumerate_roots(g, max_size, 0, g.node_count(), emit);
}

Gdv count_orbits(const Graph& g) {
    const std::size_t n = g.node_count();
    const unsigned workers = thread_count();
    std::vector<std::vector<OrbitCounts>> parts(workers);
    parallel_chunks(n, kRootChunk, workers, [&](unsigned w, std::size_t b, std::size_t e) {
        auto& acc = parts[w];
        if (acc.empty()) acc.assign(n, OrbitCounts{});
        auto emit = [&](std::span<const NodeId> nodes, int, std::span<const int> orbits) {
            const std::size_t k = std::min<std::size_t>(nodes.size(), 4);
            for (std::size_t i = 0; i < k; ++i) ++acc[nodes[i]][static_cast<std::size_t>(orbits[i])];
        };
        enumerate_roots(g, 4, b, e, emit);
    });
    Gdv gdv;
    gdv.counts.assign(n, OrbitCounts{});
    for (const auto& part : parts)
        for (std::size_t u = 0; u < part.size(); ++u)
            for (int o = 0; o < kOrbitCount; ++o) gdv.counts[u][o] += part[u][o];
    return gdv;
}

GraphletAdjacency graphlet_adjacency(const Graph& g, int graphlet) {
    check_graphlet(graphlet);
    const std::size_t n = g.node_count();
    if (graphlet == 0) {
        std::vector<std::tuple<NodeId, NodeId, std::int64_t>> upper;
        upper.reserve(g.edge_count());
        for (const auto& e : g.edges()) upper.emplace_back(e.u, e.v, 1);
        return {0, CountMatrix(n, std::move(upper))};
    }
    const int size = kGraphletSize[graphlet];
    const unsigned workers = thread_count();
    std::vector<PairCounts> parts(workers);
    parallel_chunks(n, kRootChunk, workers, [&](unsigned w, std::size_t b, std::size_t e) {
        auto& acc = parts[w];
        auto emit = [&](std::span<const NodeId> nodes, int k, std::span<const int>) {
            if (k != graphlet) return;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                for (std::size_t j = i + 1; j < nodes.size(); ++j) ++acc[pair_key(nodes[i], nodes[j])];
        };
        enumerate_roots(g, size, b, e, emit);
    });
    return {graphlet, to_count_matrix(n, parts)};
}

std::array<GraphletAdjacency, kGraphletCount> graphlet_adjacencies(const Graph& g) {
    const std::size_t n = g.node_count();
    const unsigned workers = thread_count();
    std::vector<std::array<PairCounts, kGraphletCount>> parts(workers);
    parallel_chunks(n, kRootChunk, workers, [&](unsigned w, std::size_t b, std::size_t e) {
        auto& acc = parts[w];
        auto emit = [&](std::span<const NodeId> nodes, int k, std::span<const int>) {
            for (std::size_t i = 0; i < nodes.size(); ++i)
                for (std::size_t j = i + 1; j < nodes.size(); ++j) ++acc[k][pair_key(nodes[i], nodes[j])];
        };
        enumerate_roots(g, 4, b, e, emit);
    });
    std::array<GraphletAdjacency, kGraphletCount> out;
    for (int k = 0; k < kGraphletCount; ++k) {
        std::vector<PairCounts> per_k;
        per_k.reserve(workers);
        for (auto& p : parts) per_k.push_back(std::move(p[k]));
        out[k] = {k, to_count_matrix(n, per_k)};
    }
    return out;
}

double gdv_distance(const ReducedGdv& x, const ReducedGdv& y, const OrbitWeights& w) {
    double d = 0.0;
    for (int i = 0; i < kReducedOrbitCount; ++i) {
        if (x[i] == y[i]) continue;
        const double xi = static_cast<double>(x[i]), yi = static_cast<double>(y[i]);
        d += w.w[i] * std::abs(std::log(xi + 1.0) - std::log(yi + 1.0)) / std::log(std::max(xi, yi) + 2.0);
    }
    return d;
}

Eigen::MatrixXd gdv_similarity_matrix(const Gdv& gdv, const OrbitWeights& w) {
    w.validate();
    const std::size_t n = gdv.node_count();
    Eigen::MatrixXd log1(static_cast<Eigen::Index>(n), kReducedOrbitCount);
    Eigen::MatrixXd log2(static_cast<Eigen::Index>(n), kReducedOrbitCount);
    for (std::size_t u = 0; u < n; ++u) {
        auto r = gdv.reduced(static_cast<NodeId>(u));
        for (int i = 0; i < kReducedOrbitCount; ++i) {
            log1(static_cast<Eigen::Index>(u), i) = std::log(static_cast<double>(r[i]) + 1.0);
            log2(static_cast<Eigen::Index>(u), i) = std::log(static_cast<double>(r[i]) + 2.0);
        }
    }
    const double wsum = w.sum();
    Eigen::MatrixXd sim(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_chunks(n, 32, thread_count(), [&](unsigned, std::size_t b, std::size_t e) {
        for (auto u = static_cast<Eigen::Index>(b); u < static_cast<Eigen::Index>(e); ++u) {
            sim(u, u) = 1.0;
            for (Eigen::Index v = u + 1; v < static_cast<Eigen::Index>(n); ++v) {
                double d = 0.0;
                for (int i = 0; i < kReducedOrbitCount; ++i) {
                    const double diff = std::abs(log1(u, i) - log1(v, i));
                    if (diff == 0.0) continue;
                    d += w.w[i] * diff / std::max(log2(u, i), log2(v, i));
                }
                sim(u, v) = 1.0 - d / wsum;
            }
        }
    });
    sim.triangularView<Eigen::StrictlyLower>() = sim.transpose().triangularView<Eigen::StrictlyLower>();
    return sim;
}

double graphlet_coverage(const Gdv& gdv, int graphlet) {
    check_graphlet(graphlet);
    if (gdv.node_count() == 0) return 0.0;
    auto [lo, hi] = kGraphletOrbits[graphlet];
    std::size_t touched = 0;
    for (const auto& c : gdv.counts) {
        std::int64_t s = 0;
        for (int o = lo; o < hi; ++o) s += c[o];
        if (s > 0) ++touched;
    }
    return 100.0 * static_cast<double>(touched) / static_cast<double>(gdv.node_count());
}

double graphlet_coverage(const Graph& g, int graphlet) {
    check_graphlet(graphlet);
    if (g.node_count() == 0) return 0.0;
    auto a = graphlet_adjacency(g, graphlet);
    std::size_t touched = 0;
    for (NodeId u = 0; u < g.node_count(); ++u)
        if (!a.counts.row_cols(u).empty()) ++touched;
    return 100.0 * static_cast<double>(touched) / static_cast<double>(g.node_count());
}

void write_gdv_tsv(const Graph& g, const Gdv& gdv, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out << "node";
    for (int o = 0; o < kOrbitCount; ++o) out << "\torbit" << o;
    out << '\n';
    for (NodeId u = 0; u < gdv.node_count(); ++u) {
        out << g.name(u);
        for (auto c : gdv.counts[u]) out << '\t' << c;
        out << '\n';
    }
}

void write_counts_tsv(const Graph& g, const CountMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    for (NodeId u = 0; u < m.size(); ++u) {
        auto cols = m.row_cols(u);
        auto vals = m.row_vals(u);
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] > u) out << g.name(u) << '\t' << g.name(cols[i]) << '\t' << vals[i] << '\n';
    }
}

} // namespace glemb
