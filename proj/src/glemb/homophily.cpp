#include "glemb/homophily.hpp"

#include <algorithm>
#include <limits>

#include "glemb/error.hpp"

namespace glemb {

namespace {

double share(const LabelSet& labels, Eigen::Index u, Eigen::Index v, ShareRule rule) {
    return multilabel_share(labels.labels(static_cast<NodeId>(u)), labels.labels(static_cast<NodeId>(v)), rule);
}

// Symmetric version for edge-level sums.
double edge_share(const LabelSet& labels, Eigen::Index u, Eigen::Index v, ShareRule rule) {
    if (rule == ShareRule::Jaccard) return share(labels, u, v, rule);
    return 0.5 * (share(labels, u, v, rule) + share(labels, v, u, rule));
}

void check_shape(const Eigen::MatrixXd& m, const LabelSet& labels) {
    if (m.rows() != m.cols()) fail(ErrorCode::InvalidArgument, "homophily needs a square matrix");
    if (static_cast<std::size_t>(m.rows()) != labels.node_count())
        fail(ErrorCode::InvalidArgument, "label set does not match matrix size");
}

double edge_sum(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule, bool weighted) {
    check_shape(m, labels);
    double num = 0.0, den = 0.0;
    const Eigen::Index n = m.rows();
    for (Eigen::Index u = 0; u < n; ++u) {
        if (!labels.annotated(static_cast<NodeId>(u))) continue;
        for (Eigen::Index v = u + 1; v < n; ++v) {
            const double w = m(u, v);
            if (w == 0.0 || !labels.annotated(static_cast<NodeId>(v))) continue;
            const double weight = weighted ? w : 1.0;
            num += weight * edge_share(labels, u, v, rule);
            den += weight;
        }
    }
    if (!(den > 0.0))
        fail(ErrorCode::EmptyInput, weighted ? "all annotated weights are zero" : "no edges between annotated nodes");
    return num / den;
}

double node_mean(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule, bool weighted) {
    check_shape(m, labels);
    double total = 0.0;
    std::size_t counted = 0;
    const Eigen::Index n = m.rows();
    for (Eigen::Index u = 0; u < n; ++u) {
        if (!labels.annotated(static_cast<NodeId>(u))) continue;
        double num = 0.0, den = 0.0;
        for (Eigen::Index v = 0; v < n; ++v) {
            const double w = m(u, v);
            if (v == u || w == 0.0 || !labels.annotated(static_cast<NodeId>(v))) continue;
            const double weight = weighted ? w : 1.0;
            num += weight * share(labels, u, v, rule);
            den += weight;
        }
        if (den > 0.0) {
            total += num / den;
            ++counted;
        }
    }
    if (counted == 0)
        fail(ErrorCode::EmptyInput, weighted ? "all annotated weights are zero" : "no edges between annotated nodes");
    return total / static_cast<double>(counted);
}

template <typename Fn>
std::optional<double> maybe(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::EmptyInput) return std::nullopt;
        throw;
    }
}

} // namespace

double multilabel_share(std::span<const LabelId> u, std::span<const LabelId> v, ShareRule rule) {
    if (u.empty() || v.empty()) fail(ErrorCode::InvalidArgument, "label share needs non-empty label sets");
    // Both spans are sorted and duplicate-free.
    std::size_t i = 0, j = 0, common = 0;
    while (i < u.size() && j < v.size()) {
        if (u[i] == v[j]) {
            ++common;
            ++i;
            ++j;
        } else if (u[i] < v[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    if (rule == ShareRule::OwnFraction) return static_cast<double>(common) / static_cast<double>(u.size());
    return static_cast<double>(common) / static_cast<double>(u.size() + v.size() - common);
}

double edge_homophily(const Graph& g, const LabelSet& labels, ShareRule rule) {
    if (labels.node_count() != g.node_count()) fail(ErrorCode::InvalidArgument, "label set does not match graph");
    double num = 0.0;
    std::size_t den = 0;
    for (const auto& e : g.edges()) {
        if (!labels.annotated(e.u) || !labels.annotated(e.v)) continue;
        num += edge_share(labels, e.u, e.v, rule);
        ++den;
    }
    if (den == 0) fail(ErrorCode::EmptyInput, "no edges between annotated nodes");
    return num / static_cast<double>(den);
}

double node_homophily(const Graph& g, const LabelSet& labels, ShareRule rule) {
    if (labels.node_count() != g.node_count()) fail(ErrorCode::InvalidArgument, "label set does not match graph");
    double total = 0.0;
    std::size_t counted = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (!labels.annotated(u)) continue;
        double num = 0.0;
        std::size_t den = 0;
        for (NodeId v : g.neighbors(u)) {
            if (!labels.annotated(v)) continue;
            num += share(labels, u, v, rule);
            ++den;
        }
        if (den) {
            total += num / static_cast<double>(den);
            ++counted;
        }
    }
    if (counted == 0) fail(ErrorCode::EmptyInput, "no edges between annotated nodes");
    return total / static_cast<double>(counted);
}

double edge_homophily(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule) {
    return edge_sum(m, labels, rule, false);
}

double node_homophily(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule) {
    return node_mean(m, labels, rule, false);
}

double weighted_edge_homophily(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule) {
    if (m.size() && m.minCoeff() < 0.0) fail(ErrorCode::InvalidArgument, "weights must be non-negative");
    return edge_sum(m, labels, rule, true);
}

double weighted_node_homophily(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule) {
    if (m.size() && m.minCoeff() < 0.0) fail(ErrorCode::InvalidArgument, "weights must be non-negative");
    return node_mean(m, labels, rule, true);
}

double gsi_weighted(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule) {
    check_shape(m, labels);
    if (labels.annotated_count() < 2) fail(ErrorCode::EmptyInput, "GSI needs at least two annotated nodes");
    const Eigen::Index n = m.rows();
    double total = 0.0;
    std::size_t counted = 0;
    for (Eigen::Index u = 0; u < n; ++u) {
        if (!labels.annotated(static_cast<NodeId>(u))) continue;
        Eigen::Index best = -1;
        double best_w = 0.0;
        for (Eigen::Index v = 0; v < n; ++v) {
            if (v == u || !labels.annotated(static_cast<NodeId>(v))) continue;
            if (m(u, v) > best_w) {
                best_w = m(u, v);
                best = v;
            }
        }
        if (best < 0) continue;
        total += share(labels, u, best, rule);
        ++counted;
    }
    if (counted == 0) fail(ErrorCode::EmptyInput, "every annotated row is zero");
    return total / static_cast<double>(counted);
}

double gsi_euclidean(const Eigen::MatrixXd& m, const LabelSet& labels, ShareRule rule) {
    check_shape(m, labels);
    if (labels.annotated_count() < 2) fail(ErrorCode::EmptyInput, "GSI needs at least two annotated nodes");
    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> active;
    for (Eigen::Index u = 0; u < n; ++u)
        if (labels.annotated(static_cast<NodeId>(u)) && m.row(u).squaredNorm() > 0.0) active.push_back(u);
    if (active.empty()) fail(ErrorCode::EmptyInput, "every annotated row is zero");
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(active.size()), n);
    for (std::size_t i = 0; i < active.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = m.row(active[i]);
    Eigen::MatrixXd gram = rows * rows.transpose();
    double total = 0.0;
    std::size_t counted = 0;
    const auto k = static_cast<Eigen::Index>(active.size());
    for (Eigen::Index i = 0; i < k; ++i) {
        Eigen::Index best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < k; ++j) {
            if (j == i) continue;
            const double d = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best < 0) continue;
        total += share(labels, active[static_cast<std::size_t>(i)], active[static_cast<std::size_t>(best)], rule);
        ++counted;
    }
    if (counted == 0) fail(ErrorCode::EmptyInput, "GSI needs at least two annotated non-zero rows");
    return total / static_cast<double>(counted);
}

double gsi(const Graph& g, const LabelSet& labels, ShareRule rule) {
    return gsi_euclidean(Eigen::MatrixXd(adjacency_matrix(g)), labels, rule);
}

double gsi(const MatrixRepresentation& rep, const LabelSet& labels, ShareRule rule) {
    return rep.weighted() ? gsi_weighted(rep.matrix, labels, rule) : gsi_euclidean(rep.matrix, labels, rule);
}

HomophilyReport homophily_report(const MatrixRepresentation& rep, const LabelSet& labels, ShareRule rule) {
    HomophilyReport r;
    r.representation = rep.name();
    r.annotated_node_count = labels.annotated_count();
    r.h_edge = maybe([&] { return edge_homophily(rep.matrix, labels, rule); });
    r.h_node = maybe([&] { return node_homophily(rep.matrix, labels, rule); });
    r.h_edge_weighted = maybe([&] { return weighted_edge_homophily(rep.matrix, labels, rule); });
    r.h_node_weighted = maybe([&] { return weighted_node_homophily(rep.matrix, labels, rule); });
    r.gsi = maybe([&] { return gsi(rep, labels, rule); });
    return r;
}

} // namespace glemb
