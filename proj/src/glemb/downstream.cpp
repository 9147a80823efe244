#include "glemb/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "glemb/error.hpp"

namespace glemb {

namespace {

constexpr int kMaxKMeansIterations = 300;
constexpr double kCentroidShift = 1e-6;

double log_choose(std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

std::vector<int> assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c, double* inertia,
                        std::vector<double>* dist) {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < c.rows(); ++j) {
            const double d = (x.row(i) - c.row(j)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        out[static_cast<std::size_t>(i)] = best;
        (*dist)[static_cast<std::size_t>(i)] = best_d;
        total += best_d;
    }
    *inertia = total;
    return out;
}

} // namespace

double rank_auroc(std::span<const double> scores, std::span<const char> positive) {
    if (scores.size() != positive.size()) fail(ErrorCode::InvalidArgument, "scores and labels differ in length");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_pos = 0.0, pos = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t r = i; r < j; ++r) {
            if (positive[order[r]]) {
                rank_pos += mid;
                pos += 1.0;
            }
        }
        i = j;
    }
    const double neg = static_cast<double>(scores.size()) - pos;
    if (pos == 0.0 || neg == 0.0) fail(ErrorCode::EmptyInput, "AUROC needs positive and negative examples");
    return (rank_pos - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

AurocResult cosine_auroc(const Eigen::MatrixXd& embeddings, const LabelSet& labels) {
    if (static_cast<std::size_t>(embeddings.rows()) != labels.node_count())
        fail(ErrorCode::InvalidArgument, "embedding rows do not match the label set");
    std::vector<NodeId> nodes;
    for (NodeId u = 0; u < labels.node_count(); ++u)
        if (labels.annotated(u)) nodes.push_back(u);

    AurocResult r;
    r.class_size.assign(labels.label_count(), 0);
    r.class_auroc.assign(labels.label_count(), std::numeric_limits<double>::quiet_NaN());
    for (NodeId u : nodes) ++r.class_size[labels.label(u)];
    const auto present = std::count_if(r.class_size.begin(), r.class_size.end(), [](std::size_t s) { return s > 0; });
    if (present < 2) fail(ErrorCode::InvalidArgument, "AUROC needs at least two classes");

    Eigen::MatrixXd unit(static_cast<Eigen::Index>(nodes.size()), embeddings.cols());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto row = embeddings.row(nodes[i]);
        const double norm = row.norm();
        unit.row(static_cast<Eigen::Index>(i)) = norm > 0.0 ? Eigen::RowVectorXd(row / norm)
                                                            : Eigen::RowVectorXd::Zero(embeddings.cols());
    }

    double num = 0.0, den = 0.0;
    for (LabelId c = 0; c < labels.label_count(); ++c) {
        if (r.class_size[c] == 0) continue;
        if (r.class_size[c] < 2) {
            r.warnings.push_back("class " + labels.label_name(c) + " has a single member and is skipped");
            continue;
        }
        std::vector<double> scores;
        std::vector<char> positive;
        scores.reserve(r.class_size[c] * nodes.size());
        positive.reserve(r.class_size[c] * nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (labels.label(nodes[i]) != c) continue;
            const Eigen::VectorXd sim = unit * unit.row(static_cast<Eigen::Index>(i)).transpose();
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                if (j == i) continue;
                scores.push_back(sim(static_cast<Eigen::Index>(j)));
                positive.push_back(labels.label(nodes[j]) == c);
            }
        }
        r.class_auroc[c] = rank_auroc(scores, positive);
        num += static_cast<double>(r.class_size[c]) * r.class_auroc[c];
        den += static_cast<double>(r.class_size[c]);
    }
    if (den == 0.0) fail(ErrorCode::EmptyInput, "no class has two or more members");
    r.weighted_auroc = num / den;
    return r;
}

int default_cluster_count(std::size_t n) noexcept {
    return std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n) / 2.0))));
}

KMeansResult kmeans_clusters(const Eigen::MatrixXd& x, std::optional<int> k_opt) {
    const Eigen::Index n = x.rows();
    const int k = k_opt.value_or(default_cluster_count(static_cast<std::size_t>(n)));
    if (k < 2 || k > n) fail(ErrorCode::InvalidArgument, "k-means needs 2 <= k <= n");

    Eigen::MatrixXd c(k, x.cols());
    c.row(0) = x.row(0);
    std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    for (int j = 1; j < k; ++j) {
        Eigen::Index far = 0;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto& d = nearest[static_cast<std::size_t>(i)];
            d = std::min(d, (x.row(i) - c.row(j - 1)).squaredNorm());
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        c.row(j) = x.row(far);
    }

    KMeansResult r;
    std::vector<double> dist(static_cast<std::size_t>(n));
    double inertia = 0.0;
    for (int it = 1; it <= kMaxKMeansIterations; ++it) {
        r.assignment = assign(x, c, &inertia, &dist);
        r.inertia_trace.push_back(inertia);
        r.iterations = it;

        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, x.cols());
        std::vector<std::size_t> size(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int a = r.assignment[static_cast<std::size_t>(i)];
            next.row(a) += x.row(i);
            ++size[static_cast<std::size_t>(a)];
        }
        std::vector<char> used(static_cast<std::size_t>(n), 0);
        for (int j = 0; j < k; ++j) {
            if (size[static_cast<std::size_t>(j)]) {
                next.row(j) /= static_cast<double>(size[static_cast<std::size_t>(j)]);
                continue;
            }
            Eigen::Index far = 0;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (used[static_cast<std::size_t>(i)]) continue;
                if (dist[static_cast<std::size_t>(i)] > far_d) {
                    far_d = dist[static_cast<std::size_t>(i)];
                    far = i;
                }
            }
            used[static_cast<std::size_t>(far)] = 1;
            next.row(j) = x.row(far);
        }
        const double shift = (next - c).rowwise().norm().maxCoeff();
        c = std::move(next);
        if (shift < kCentroidShift) break;
    }
    r.assignment = assign(x, c, &inertia, &dist);
    r.centroids = std::move(c);
    return r;
}

double hypergeom_p(std::size_t n, std::size_t x, std::size_t m, std::size_t k) {
    if (n > m || k > m || x > std::min(n, k)) fail(ErrorCode::InvalidArgument, "hypergeometric bounds violated");
    if (x == 0) return 1.0;
    const std::size_t lo = std::max(x, n > m - k ? n - (m - k) : std::size_t{0});
    const std::size_t hi = std::min(n, k);
    const double log_total = log_choose(m, n);
    double p = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) p += std::exp(log_choose(k, i) + log_choose(m - k, n - i) - log_total);
    return std::min(1.0, p);
}

std::vector<double> bh_correct(std::span<const double> pvalues) {
    const std::size_t m = pvalues.size();
    for (double p : pvalues)
        if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, "p-values must lie in [0, 1]");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
    std::vector<double> out(m);
    double running = 1.0;
    for (std::size_t r = m; r-- > 0;) {
        const std::size_t i = order[r];
        const double adj = pvalues[i] * static_cast<double>(m) / static_cast<double>(r + 1);
        running = std::min(running, adj);
        out[i] = running;
    }
    return out;
}

EnrichmentResult enrichment_analysis(std::span<const int> assignment, int cluster_count, const LabelSet& annotations) {
    if (assignment.size() != annotations.node_count())
        fail(ErrorCode::InvalidArgument, "partition does not match the annotation set");
    if (cluster_count < 1) fail(ErrorCode::InvalidArgument, "cluster count must be positive");
    if (annotations.annotated_count() == 0) fail(ErrorCode::EmptyInput, "no annotated nodes");

    EnrichmentResult r;
    r.clusters.assign(assignment.begin(), assignment.end());
    r.cluster_count = cluster_count;

    const std::size_t labels = annotations.label_count();
    const auto cc = static_cast<std::size_t>(cluster_count);
    std::vector<std::size_t> network_hits(labels, 0), cluster_annotated(cc, 0);
    std::vector<std::vector<std::size_t>> hits(cc, std::vector<std::size_t>(labels, 0));
    std::size_t m = 0;
    for (NodeId u = 0; u < annotations.node_count(); ++u) {
        if (!annotations.annotated(u)) continue;
        const int c = assignment[u];
        if (c < 0 || c >= cluster_count) fail(ErrorCode::InvalidArgument, "cluster id out of range");
        ++m;
        ++cluster_annotated[static_cast<std::size_t>(c)];
        for (LabelId l : annotations.labels(u)) {
            ++network_hits[l];
            ++hits[static_cast<std::size_t>(c)][l];
        }
    }

    std::vector<char> tested(labels, 0);
    for (LabelId l = 0; l < labels; ++l) {
        if (network_hits[l] >= 2) {
            tested[l] = 1;
            ++r.tested_annotations;
        } else if (network_hits[l] == 1) {
            r.warnings.push_back("annotation " + annotations.label_name(l) + " has fewer than two annotated nodes");
        }
    }
    if (r.tested_annotations == 0) fail(ErrorCode::EmptyInput, "no annotation has two or more annotated nodes");

    for (std::size_t c = 0; c < cc; ++c) {
        if (cluster_annotated[c] == 0) continue;
        for (LabelId l = 0; l < labels; ++l) {
            if (!tested[l]) continue;
            EnrichmentTest t;
            t.cluster = static_cast<int>(c);
            t.annotation = l;
            t.cluster_annotated = cluster_annotated[c];
            t.hits = hits[c][l];
            t.p = hypergeom_p(t.cluster_annotated, t.hits, m, network_hits[l]);
            r.tests.push_back(t);
        }
    }
    std::vector<double> ps;
    ps.reserve(r.tests.size());
    for (const auto& t : r.tests) ps.push_back(t.p);
    const auto adj = bh_correct(ps);
    for (std::size_t i = 0; i < r.tests.size(); ++i) r.tests[i].p_adjusted = adj[i];

    std::vector<std::vector<char>> enriched(cc, std::vector<char>(labels, 0));
    std::vector<char> term_enriched(labels, 0), cluster_enriched(cc, 0);
    for (const auto& t : r.tests) {
        if (!t.enriched()) continue;
        enriched[static_cast<std::size_t>(t.cluster)][t.annotation] = 1;
        term_enriched[t.annotation] = 1;
        cluster_enriched[static_cast<std::size_t>(t.cluster)] = 1;
    }
    std::size_t covered = 0;
    for (NodeId u = 0; u < annotations.node_count(); ++u) {
        if (!annotations.annotated(u)) continue;
        const auto& row = enriched[static_cast<std::size_t>(assignment[u])];
        const auto ls = annotations.labels(u);
        if (std::any_of(ls.begin(), ls.end(), [&](LabelId l) { return row[l] != 0; })) ++covered;
    }
    r.gene_coverage = static_cast<double>(covered) / static_cast<double>(m);
    r.functional_coverage = static_cast<double>(std::count(term_enriched.begin(), term_enriched.end(), 1)) /
                            static_cast<double>(r.tested_annotations);

    std::vector<char> nonempty(cc, 0);
    for (int c : assignment) nonempty[static_cast<std::size_t>(c)] = 1;
    const auto clusters_used = std::count(nonempty.begin(), nonempty.end(), 1);
    r.enriched_cluster_fraction = static_cast<double>(std::count(cluster_enriched.begin(), cluster_enriched.end(), 1)) /
                                  static_cast<double>(clusters_used);
    return r;
}

EnrichmentResult module_discovery(const Eigen::MatrixXd& embeddings, const LabelSet& annotations,
                                  std::optional<int> k) {
    if (static_cast<std::size_t>(embeddings.rows()) != annotations.node_count())
        fail(ErrorCode::InvalidArgument, "embedding rows do not match the annotation set");
    if (annotations.annotated_count() == 0) fail(ErrorCode::EmptyInput, "no annotated nodes");
    const KMeansResult km = kmeans_clusters(embeddings, k);
    return enrichment_analysis(km.assignment, static_cast<int>(km.centroids.rows()), annotations);
}

} // namespace glemb
