#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "glemb/graph.hpp"

namespace glemb {

inline constexpr int kGraphletCount = 9;
inline constexpr int kOrbitCount = 15;
inline constexpr int kReducedOrbitCount = 11;

/// Orbits whose counts cannot be derived from the others (3, 12, 13 and 14
/// are dropped).
inline constexpr std::array<int, kReducedOrbitCount> kNonRedundantOrbits = {0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11};

/// Number of nodes in each graphlet G0..G8.
inline constexpr std::array<int, kGraphletCount> kGraphletSize = {2, 3, 3, 4, 4, 4, 4, 4, 4};

/// First and one-past-last orbit of each graphlet.
inline constexpr std::array<std::pair<int, int>, kGraphletCount> kGraphletOrbits = {
    {{0, 1}, {1, 3}, {3, 4}, {4, 6}, {6, 8}, {8, 9}, {9, 12}, {12, 14}, {14, 15}}};

using OrbitCounts = std::array<std::int64_t, kOrbitCount>;
using ReducedGdv = std::array<std::int64_t, kReducedOrbitCount>;

/// Per-node orbit counts of graphlets G0..G8.
struct Gdv {
    std::vector<OrbitCounts> counts;

    std::size_t node_count() const noexcept { return counts.size(); }
    ReducedGdv reduced(NodeId u) const noexcept;
};

/// Orbit weights for the GDV distance, indexed by non-redundant orbit.
struct OrbitWeights {
    std::array<double, kReducedOrbitCount> w{};

    static OrbitWeights uniform();
    /// w_i = 1 - log(o_i)/log(73), o_i = number of orbits orbit i depends on
    /// (counting itself) in the 73-orbit dependency table.
    static OrbitWeights dependency();
    double sum() const noexcept;
    void validate() const;
};

/// Sparse symmetric matrix of non-negative integer counts (CSR, sorted columns,
/// zero diagonal).
class CountMatrix {
public:
    CountMatrix() = default;
    /// Builds from upper-triangle entries (u < v); mirrored internally.
    CountMatrix(std::size_t n, std::vector<std::tuple<NodeId, NodeId, std::int64_t>> upper);

    std::size_t size() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
    /// Number of stored (directed) entries, i.e. twice the number of pairs.
    std::size_t nnz() const noexcept { return cols_.size(); }
    std::int64_t at(NodeId u, NodeId v) const noexcept;
    std::span<const NodeId> row_cols(NodeId u) const noexcept {
        return {cols_.data() + row_ptr_[u], cols_.data() + row_ptr_[u + 1]};
    }
    std::span<const std::int64_t> row_vals(NodeId u) const noexcept {
        return {vals_.data() + row_ptr_[u], vals_.data() + row_ptr_[u + 1]};
    }
    std::int64_t row_sum(NodeId u) const noexcept;
    std::int64_t total() const noexcept;
    bool empty() const noexcept { return cols_.empty(); }

    CountMatrix binarized() const;
    Eigen::MatrixXd to_dense() const;

private:
    std::vector<std::size_t> row_ptr_;
    std::vector<NodeId> cols_;
    std::vector<std::int64_t> vals_;
};

/// A_k: counts(u,v) = number of induced G_k instances containing both u and v.
struct GraphletAdjacency {
    int graphlet = 0;
    CountMatrix counts;

    CountMatrix binarized() const { return counts.binarized(); }
};

/// Calls `fn(nodes, graphlet_id, orbits)` once per connected induced subgraph
/// with 2..max_size nodes. `orbits[i]` is the orbit of `nodes[i]`. Roots are
/// processed in increasing id order; subgraphs are attributed to their
/// smallest node.
using SubgraphVisitor =
    std::function<void(std::span<const NodeId> nodes, int graphlet, std::span<const int> orbits)>;
void enumerate_graphlets(const Graph& g, int max_size, const SubgraphVisitor& fn);

Gdv count_orbits(const Graph& g);

GraphletAdjacency graphlet_adjacency(const Graph& g, int graphlet);
std::array<GraphletAdjacency, kGraphletCount> graphlet_adjacencies(const Graph& g);

/// Weighted log-scaled distance between two reduced GDVs, in [0, sum(w)].
double gdv_distance(const ReducedGdv& x, const ReducedGdv& y, const OrbitWeights& w);

/// Dense symmetric similarity matrix 1 - dist/sum(w); diagonal is 1.
Eigen::MatrixXd gdv_similarity_matrix(const Gdv& gdv, const OrbitWeights& w);

/// Percentage of nodes that touch at least one G_k instance.
double graphlet_coverage(const Gdv& gdv, int graphlet);
double graphlet_coverage(const Graph& g, int graphlet);

/// Graphlets whose coverage falls below this percentage are excluded from
/// batch analyses.
inline constexpr double kCoverageExclusionPercent = 50.0;

void write_gdv_tsv(const Graph& g, const Gdv& gdv, const std::filesystem::path& path);
void write_counts_tsv(const Graph& g, const CountMatrix& m, const std::filesystem::path& path);

} // namespace glemb
