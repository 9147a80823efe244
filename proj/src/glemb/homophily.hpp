#pragma once

#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "glemb/graph.hpp"
#include "glemb/representation.hpp"

namespace glemb {

/// Agreement between two non-empty label sets.
enum class ShareRule {
    Jaccard,     ///< |u ∩ v| / |u ∪ v|
    OwnFraction, ///< |u ∩ v| / |u|
};

double multilabel_share(std::span<const LabelId> u, std::span<const LabelId> v, ShareRule rule = ShareRule::Jaccard);

// All indices below consider only pairs whose endpoints are both annotated.
// A matrix "edge" is a non-zero off-diagonal entry; matrices are assumed
// symmetric and only the upper triangle is read for edge-level sums.

double edge_homophily(const Graph& g, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);
double edge_homophily(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);
double node_homophily(const Graph& g, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);
double node_homophily(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);

double weighted_edge_homophily(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);
double weighted_node_homophily(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);

/// Nearest neighbor = largest entry in the node's row (ties: smallest id).
double gsi_weighted(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);
/// Nearest neighbor = smallest Euclidean distance between rows (ties:
/// smallest id). Nodes with all-zero rows are skipped.
double gsi_euclidean(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);
double gsi(const Graph& g, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);
/// Weighted representations use gsi_weighted, Adjacency(G_k) uses gsi_euclidean.
double gsi(const MatrixRepresentation& rep, const LabelSet& labels, ShareRule rule = ShareRule::Jaccard);

struct HomophilyReport {
    std::string representation;
    // Undefined indices (no annotated edges, all-zero weights) are empty.
    std::optional<double> h_edge;
    std::optional<double> h_node;
    std::optional<double> h_edge_weighted;
    std::optional<double> h_node_weighted;
    std::optional<double> gsi;
    std::size_t annotated_node_count = 0;
};

HomophilyReport homophily_report(const MatrixRepresentation& rep, const LabelSet& labels,
                                 ShareRule rule = ShareRule::Jaccard);

} // namespace glemb
