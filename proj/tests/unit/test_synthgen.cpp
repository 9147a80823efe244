#include <cmath>

#include <gtest/gtest.h>

#include "glemb/error.hpp"
#include "glemb/homophily.hpp"
#include "glemb/synthgen.hpp"

using namespace glemb;

TEST(Partition, EqualSizesPutRemainderFirst) {
    EXPECT_EQ(equal_community_sizes(10, 3), (std::vector<std::size_t>{4, 3, 3}));
    EXPECT_EQ(equal_community_sizes(1000, 5), (std::vector<std::size_t>(5, 200)));
}

TEST(Partition, ExtremesGiveCliquesAndBipartite) {
    const auto [cliques, l1] = random_partition_graph({{3, 3}, 1.0, 0.0, 1});
    EXPECT_EQ(cliques.edge_count(), 6u);
    EXPECT_EQ(edge_homophily(cliques, l1), 1.0);
    const auto [bip, l2] = random_partition_graph({{3, 3}, 0.0, 1.0, 1});
    EXPECT_EQ(bip.edge_count(), 9u);
    EXPECT_EQ(edge_homophily(bip, l2), 0.0);
}

TEST(Partition, SameSeedSameGraph) {
    const PartitionSpec spec{equal_community_sizes(100, 4), 0.2, 0.02, 42};
    EXPECT_EQ(random_partition_graph(spec).first, random_partition_graph(spec).first);
    PartitionSpec other = spec;
    other.seed = 43;
    EXPECT_FALSE(random_partition_graph(spec).first == random_partition_graph(other).first);
}

TEST(Partition, EdgeCountMatchesExpectation) {
    const double within = 5.0 * 60.0 * 59.0 / 2.0, total = 300.0 * 299.0 / 2.0;
    const double expected = 0.5 * within + 0.1 * (total - within);
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
        sum += static_cast<double>(random_partition_graph({equal_community_sizes(300, 5), 0.5, 0.1, seed}).first.edge_count());
    EXPECT_NEAR(sum / 50.0, expected, 0.02 * expected);
}

TEST(Partition, WithinCommunityCountsAreBinomial) {
    const double pairs = 200.0 * 199.0 / 2.0, mean = 0.5 * pairs, sd = std::sqrt(pairs * 0.25);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto [g, l] = random_partition_graph({equal_community_sizes(1000, 5), 0.5, 0.05, seed});
        std::vector<double> within(5, 0.0);
        for (const Edge& e : g.edges())
            if (l.label(e.u) == l.label(e.v)) within[l.label(e.u)] += 1.0;
        for (double w : within) EXPECT_NEAR(w, mean, 3.0 * sd) << "seed " << seed;
    }
}

TEST(Partition, NoCrossEdgesIsFullyHomophilous) {
    const auto [g, l] = random_partition_graph({equal_community_sizes(120, 4), 0.3, 0.0, 7});
    EXPECT_EQ(edge_homophily(g, l), 1.0);
    EXPECT_EQ(node_homophily(g, l), 1.0);
}

TEST(Partition, InvalidSpecIsRejected) {
    EXPECT_THROW(random_partition_graph({{3, 3}, 1.5, 0.0, 1}), Error);
    EXPECT_THROW(random_partition_graph({{}, 0.5, 0.0, 1}), Error);
}

TEST(Sweep, SingleCellProducesOneRowPerRepresentation) {
    SweepOptions o;
    o.p_in = {1.0};
    o.p_out = {0.0};
    o.nodes = 60;
    o.communities = 3;
    o.dimension = 6;
    o.folds = 3;
    const SweepTable t = sweep(o);
    ASSERT_EQ(t.rows.size(), 3u);
    for (const auto& r : t.rows) {
        EXPECT_EQ(r.p_in, 1.0);
        EXPECT_FALSE(r.connected);
        ASSERT_TRUE(r.h_edge.has_value());
        EXPECT_EQ(*r.h_edge, 1.0);
        EXPECT_EQ(r.f1_linear, 1.0) << r.representation;
    }
    EXPECT_EQ(t.rows[0].representation, "Adjacency(G_0)");
}

TEST(Sweep, DeterministicCells) {
    EXPECT_EQ(cell_seed(1, 3, 0), cell_seed(1, 3, 0));
    EXPECT_NE(cell_seed(1, 3, 0), cell_seed(1, 3, 1));
    EXPECT_NE(cell_seed(1, 3, 0), cell_seed(2, 3, 0));
}

TEST(Sweep, CorrelationSigns) {
    SweepTable t;
    for (int i = 0; i < 6; ++i) {
        SweepRow r;
        r.f1_linear = 0.1 * i;
        r.gsi = 2.0 * i + 1.0;
        r.h_node = -0.5 * i;
        r.h_edge = std::nullopt;
        t.rows.push_back(r);
    }
    const auto c = correlate_sweep(t);
    bool seen_gsi = false, seen_node = false;
    for (const auto& ic : c) {
        if (ic.index == "gsi") {
            seen_gsi = true;
            EXPECT_NEAR(ic.correlation.r, 1.0, 1e-12);
            EXPECT_EQ(ic.correlation.n, 6u);
        } else if (ic.index == "h_node") {
            seen_node = true;
            EXPECT_NEAR(ic.correlation.r, -1.0, 1e-12);
        }
    }
    EXPECT_TRUE(seen_gsi);
    EXPECT_TRUE(seen_node);
}
