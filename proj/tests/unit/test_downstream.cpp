#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "glemb/downstream.hpp"
#include "glemb/error.hpp"
#include "oracles.hpp"

using namespace glemb;

TEST(Hypergeom, ZeroHitsIsCertain) {
    EXPECT_EQ(hypergeom_p(4, 0, 10, 3), 1.0);
}

TEST(Hypergeom, HandValues) {
    EXPECT_NEAR(hypergeom_p(4, 4, 10, 5), 5.0 / 210.0, 1e-15);
    EXPECT_NEAR(hypergeom_p(1, 1, 2, 1), 0.5, 1e-15);
    EXPECT_THROW(hypergeom_p(3, 4, 10, 5), Error);
}

TEST(Hypergeom, MatchesEnumeration) {
    for (std::size_t m = 1; m <= 12; ++m)
        for (std::size_t n = 0; n <= m; ++n)
            for (std::size_t k = 0; k <= m; ++k)
                for (std::size_t x = 0; x <= std::min(n, k); ++x)
                    ASSERT_NEAR(hypergeom_p(n, x, m, k), test::hypergeom_enumeration(n, x, m, k), 1e-12)
                        << n << " " << x << " " << m << " " << k;
}

TEST(BenjaminiHochberg, HandExample) {
    const std::vector<double> p{0.01, 0.04, 0.03, 0.005};
    const auto q = bh_correct(p);
    const std::vector<double> expected{0.02, 0.04, 0.04, 0.02};
    ASSERT_EQ(q.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(q[i], expected[i], 1e-15);
}

TEST(BenjaminiHochberg, DegenerateInputs) {
    const std::vector<double> one{0.3};
    EXPECT_EQ(bh_correct(one), one);
    const std::vector<double> same(5, 0.2);
    EXPECT_EQ(bh_correct(same), same);
    EXPECT_TRUE(bh_correct(std::vector<double>{}).empty());
}

TEST(RankAuroc, PerfectTiedAndInverted) {
    const std::vector<double> s{0.9, 0.8, 0.2, 0.1};
    const std::vector<char> pos{1, 1, 0, 0}, inv{0, 0, 1, 1};
    EXPECT_EQ(rank_auroc(s, pos), 1.0);
    EXPECT_EQ(rank_auroc(s, inv), 0.0);
    const std::vector<double> tied(4, 0.5);
    EXPECT_EQ(rank_auroc(tied, pos), 0.5);
}

TEST(CosineAuroc, OneHotEmbeddingsArePerfect) {
    std::vector<LabelId> of(30);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(30, 3);
    for (int i = 0; i < 30; ++i) {
        of[static_cast<std::size_t>(i)] = static_cast<LabelId>(i % 3);
        x(i, i % 3) = 1.0;
    }
    const AurocResult r = cosine_auroc(x, make_single_labels(of, 3));
    EXPECT_EQ(r.weighted_auroc, 1.0);
    for (double a : r.class_auroc) EXPECT_EQ(a, 1.0);
}

TEST(CosineAuroc, IdenticalVectorsGiveHalf) {
    std::vector<LabelId> of(20);
    for (std::size_t i = 0; i < 20; ++i) of[i] = static_cast<LabelId>(i % 2);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(20, 4);
    EXPECT_EQ(cosine_auroc(x, make_single_labels(of, 2)).weighted_auroc, 0.5);
}

TEST(CosineAuroc, RandomEmbeddingsAreNearHalf) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd x(300, 16);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = g(rng);
    std::vector<LabelId> of(300);
    for (std::size_t i = 0; i < 300; ++i) of[i] = static_cast<LabelId>(i % 4);
    EXPECT_NEAR(cosine_auroc(x, make_single_labels(of, 4)).weighted_auroc, 0.5, 0.03);
}

TEST(KMeans, DefaultClusterCount) {
    EXPECT_EQ(default_cluster_count(1000), 22);
    EXPECT_EQ(default_cluster_count(3), 2);
}

TEST(KMeans, TwoBlobsAreSplit) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 0.3);
    Eigen::MatrixXd x(40, 2);
    for (Eigen::Index i = 0; i < 40; ++i) {
        x(i, 0) = (i < 20 ? -5.0 : 5.0) + g(rng);
        x(i, 1) = g(rng);
    }
    const KMeansResult r = kmeans_clusters(x, 2);
    for (int i = 1; i < 20; ++i) EXPECT_EQ(r.assignment[static_cast<std::size_t>(i)], r.assignment[0]);
    for (int i = 21; i < 40; ++i) EXPECT_EQ(r.assignment[static_cast<std::size_t>(i)], r.assignment[20]);
    EXPECT_NE(r.assignment[0], r.assignment[20]);
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i)
        EXPECT_LE(r.inertia_trace[i], r.inertia_trace[i - 1] + 1e-12);
}

TEST(KMeans, IdenticalPointsDoNotCrash) {
    const KMeansResult r = kmeans_clusters(Eigen::MatrixXd::Ones(10, 3), 3);
    EXPECT_EQ(r.assignment.size(), 10u);
    EXPECT_EQ(r.inertia_trace.back(), 0.0);
}

TEST(Enrichment, PerfectModules) {
    std::vector<LabelId> of(40);
    std::vector<int> assignment(40);
    for (std::size_t i = 0; i < 40; ++i) {
        of[i] = static_cast<LabelId>(i / 10);
        assignment[i] = static_cast<int>(i / 10);
    }
    const EnrichmentResult r = enrichment_analysis(assignment, 4, make_single_labels(of, 4));
    EXPECT_EQ(r.gene_coverage, 1.0);
    EXPECT_EQ(r.functional_coverage, 1.0);
    EXPECT_EQ(r.enriched_cluster_fraction, 1.0);
}

TEST(Enrichment, SingleClusterFindsNothing) {
    std::vector<LabelId> of(40);
    for (std::size_t i = 0; i < 40; ++i) of[i] = static_cast<LabelId>(i % 4);
    const std::vector<int> assignment(40, 0);
    const EnrichmentResult r = enrichment_analysis(assignment, 1, make_single_labels(of, 4));
    EXPECT_EQ(r.gene_coverage, 0.0);
    EXPECT_EQ(r.functional_coverage, 0.0);
}

TEST(Enrichment, RandomEmbeddingsRarelyEnrich) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd x(400, 8);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = g(rng);
    std::vector<LabelId> of(400);
    for (std::size_t i = 0; i < 400; ++i) of[i] = static_cast<LabelId>(rng() % 10);
    const EnrichmentResult r = module_discovery(x, make_single_labels(of, 10));
    EXPECT_LT(r.gene_coverage, 0.2);
}

TEST(Enrichment, UnderAnnotatedTermsAreDropped) {
    const std::vector<LabelId> of{0, 0, 1};
    const std::vector<int> assignment{0, 0, 1};
    const EnrichmentResult r = enrichment_analysis(assignment, 2, make_single_labels(of, 2));
    EXPECT_EQ(r.tested_annotations, 1u);
    EXPECT_FALSE(r.warnings.empty());
}
