#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace glemb {

using NodeId = std::uint32_t;
using LabelId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph with contiguous node ids.
///
/// Every edge is stored once with u < v; neighbor lists are sorted. External
/// node names map to ids in first-appearance order.
class Graph {
public:
    Graph() = default;

    /// Builds from raw pairs; self-loops and duplicates are dropped. `dropped`
    /// receives {self_loops, duplicates} when non-null.
    Graph(std::vector<std::string> names, std::span<const std::pair<NodeId, NodeId>> pairs,
          std::pair<std::size_t, std::size_t>* dropped = nullptr);

    std::size_t node_count() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const NodeId> neighbors(NodeId u) const noexcept {
        return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
    }
    std::size_t degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }
    bool adjacent(NodeId u, NodeId v) const noexcept;

    const std::string& name(NodeId u) const { return names_[u]; }
    std::span<const std::string> names() const noexcept { return names_; }
    std::optional<NodeId> find(const std::string& name) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.names_ == b.names_ && a.edges_ == b.edges_;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adj_;
};

struct EdgeListReport {
    std::size_t lines = 0;
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
};

/// Reads a two-column edge list. '#' starts a comment line; tabs and spaces
/// both separate tokens. Throws Error(Parse) naming the offending line.
Graph load_edge_list(const std::filesystem::path& path, EdgeListReport* report = nullptr);
Graph parse_edge_list(std::string_view text, EdgeListReport* report = nullptr);
void write_edge_list(const Graph& g, const std::filesystem::path& path);

enum class LabelKind { Single, Multi };

/// Labels keyed by external node token, as read from a label file.
class LabelTable {
public:
    LabelKind kind = LabelKind::Single;
    std::vector<std::string> label_names;
    /// (node token, sorted label ids) in first-appearance order.
    std::vector<std::pair<std::string, std::vector<LabelId>>> entries;

    std::size_t node_count() const noexcept { return entries.size(); }
};

/// Labels resolved against a graph's internal ids. A node with an empty
/// label list is unannotated.
class LabelSet {
public:
    LabelSet() = default;
    LabelSet(LabelKind kind, std::vector<std::vector<LabelId>> labels_of,
             std::vector<std::string> label_names);

    LabelKind kind() const noexcept { return kind_; }
    std::size_t node_count() const noexcept { return labels_of_.size(); }
    std::size_t label_count() const noexcept { return label_names_.size(); }
    std::span<const LabelId> labels(NodeId u) const noexcept { return labels_of_[u]; }
    bool annotated(NodeId u) const noexcept { return !labels_of_[u].empty(); }
    std::size_t annotated_count() const noexcept;
    /// Only meaningful for annotated nodes of a single-label set.
    LabelId label(NodeId u) const noexcept { return labels_of_[u].front(); }
    const std::string& label_name(LabelId l) const { return label_names_[l]; }
    std::span<const std::string> label_names() const noexcept { return label_names_; }

private:
    LabelKind kind_ = LabelKind::Single;
    std::vector<std::vector<LabelId>> labels_of_;
    std::vector<std::string> label_names_;
};

/// Reads "node<TAB>label" lines (spaces also accepted). A single-label file
/// with a repeated node is rejected.
LabelTable load_labels(const std::filesystem::path& path, LabelKind kind);
LabelTable parse_labels(std::string_view text, LabelKind kind);

/// Resolves a label table against a graph. Tokens not present in the graph
/// are skipped and reported through `unknown_tokens`.
LabelSet bind_labels(const LabelTable& table, const Graph& g,
                     std::vector<std::string>* unknown_tokens = nullptr);

/// Labels indexed directly by node id (used by generators and tests).
LabelSet make_single_labels(std::span<const LabelId> label_of, std::size_t label_count);

/// Connected component ids in BFS discovery order from the lowest node id.
std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count = nullptr);

/// Induced subgraph on the largest connected component. Ties go to the
/// component whose smallest external name sorts first. Surviving nodes keep
/// their relative order.
std::pair<Graph, LabelSet> largest_connected_component(const Graph& g, const LabelSet& labels);
Graph largest_connected_component(const Graph& g);

} // namespace glemb
