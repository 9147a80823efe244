#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glemb/eval.hpp"
#include "glemb/graph.hpp"
#include "glemb/onmtf.hpp"
#include "glemb/representation.hpp"

namespace glemb {

struct PartitionSpec {
    std::vector<std::size_t> community_sizes;
    double p_in = 0.0;
    double p_out = 0.0;
    std::uint64_t seed = 0;

    std::size_t node_count() const noexcept;
    void validate() const;
};

/// n split into `communities` near-equal parts, the remainder going to the
/// first communities.
std::vector<std::size_t> equal_community_sizes(std::size_t n, std::size_t communities);

/// Node pairs (u, v), u < v, are visited in lexicographic order and each
/// consumes one draw u = (x >> 11) * 2^-53 from a std::mt19937_64 seeded
/// with spec.seed; the edge exists when u < p. Nodes are named by their
/// decimal id and labeled by community.
std::pair<Graph, LabelSet> random_partition_graph(const PartitionSpec& spec);

struct SweepOptions {
    std::vector<double> p_in;
    std::vector<double> p_out;
    std::size_t nodes = 1000;
    std::size_t communities = 5;
    int replicates = 1;
    int dimension = 32;
    std::uint64_t seed = 1;
    int folds = 10;
    std::vector<RepresentationSpec> representations = {
        {RepresentationKind::Adjacency, 0, kDefaultWalkLength},
        {RepresentationKind::Line, 0, kDefaultWalkLength},
        {RepresentationKind::DeepWalk, 0, kDefaultWalkLength},
    };
    OnmtfOptions onmtf{};
};

struct SweepRow {
    double p_in = 0.0;
    double p_out = 0.0;
    int replicate = 0;
    std::string representation;
    /// Unweighted indices for Adjacency, weighted ones otherwise.
    std::optional<double> h_node;
    std::optional<double> h_edge;
    std::optional<double> gsi;
    double f1_linear = 0.0;
    std::size_t edges = 0;
    bool connected = false;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    /// One message per skipped cell or failed (cell, representation).
    std::vector<std::string> skipped;
};

/// Seed of one (cell, replicate), derived from the sweep seed.
std::uint64_t cell_seed(std::uint64_t base, std::size_t cell, int replicate) noexcept;

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;
SweepTable sweep(const SweepOptions& options, const SweepProgress& progress = {});

struct IndexCorrelation {
    std::string index;
    Correlation correlation;
};
/// Pearson correlation of gsi, h_node and h_edge with f1_linear over the rows
/// where the index is defined; indices defined on fewer than 3 rows are omitted.
std::vector<IndexCorrelation> correlate_sweep(const SweepTable& table);

void write_sweep_tsv(const SweepTable& table, const std::filesystem::path& path, const std::string& header = {});

} // namespace glemb
