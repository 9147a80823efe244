#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glemb/graph.hpp"

namespace glemb {

inline constexpr double kEnrichmentAlpha = 0.05;

struct AurocResult {
    /// Class-size weighted mean over the evaluated classes.
    double weighted_auroc = 0.0;
    /// Per label; NaN for skipped classes.
    std::vector<double> class_auroc;
    std::vector<std::size_t> class_size;
    std::vector<std::string> warnings;
};

/// One-vs-rest label prediction from cosine similarity. For class c the
/// anchors are the members of c and the candidates every other annotated
/// node; a pair is positive when the candidate is also in c. Zero vectors
/// have cosine 0 with everything.
AurocResult cosine_auroc(const Eigen::MatrixXd& embeddings, const LabelSet& labels);

/// Area under the ROC curve by the rank statistic (midranks for ties).
double rank_auroc(std::span<const double> scores, std::span<const char> positive);

struct KMeansResult {
    std::vector<int> assignment;
    Eigen::MatrixXd centroids;
    int iterations = 0;
    /// Within-cluster sum of squares after each assignment step.
    std::vector<double> inertia_trace;
};

/// round(sqrt(n / 2)), at least 2.
int default_cluster_count(std::size_t n) noexcept;

/// Lloyd's algorithm with farthest-first seeding from row 0 (ties to the
/// smallest row). Stops after 300 iterations or once no centroid moves by
/// 1e-6. An empty cluster is re-seeded at the point farthest from its
/// assigned centroid.
KMeansResult kmeans_clusters(const Eigen::MatrixXd& x, std::optional<int> k = std::nullopt);

/// P[hits >= x] when drawing n of m items of which k are hits.
double hypergeom_p(std::size_t n, std::size_t x, std::size_t m, std::size_t k);

/// Benjamini-Hochberg step-up adjustment, input order preserved.
std::vector<double> bh_correct(std::span<const double> pvalues);

struct EnrichmentTest {
    int cluster = 0;
    LabelId annotation = 0;
    std::size_t cluster_annotated = 0; ///< N
    std::size_t hits = 0;              ///< X
    double p = 1.0;
    double p_adjusted = 1.0;
    bool enriched() const noexcept { return p_adjusted <= kEnrichmentAlpha; }
};

struct EnrichmentResult {
    std::vector<int> clusters;
    int cluster_count = 0;
    std::vector<EnrichmentTest> tests;
    std::size_t tested_annotations = 0;
    double gene_coverage = 0.0;
    double functional_coverage = 0.0;
    double enriched_cluster_fraction = 0.0;
    std::vector<std::string> warnings;
};

/// Enrichment of a fixed partition. Every (cluster, annotation) pair with at
/// least one annotated node in the cluster is tested; annotations carried by
/// fewer than two annotated nodes are dropped. All tests form one BH family.
EnrichmentResult enrichment_analysis(std::span<const int> assignment, int cluster_count, const LabelSet& annotations);

/// k-means on the embeddings followed by enrichment_analysis.
EnrichmentResult module_discovery(const Eigen::MatrixXd& embeddings, const LabelSet& annotations,
                                  std::optional<int> k = std::nullopt);

} // namespace glemb
