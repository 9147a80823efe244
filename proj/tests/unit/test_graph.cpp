#include <gtest/gtest.h>

#include "glemb/error.hpp"
#include "glemb/graph.hpp"
#include "oracles.hpp"

using namespace glemb;

TEST(EdgeList, DuplicateEdgesAreDropped) {
    EdgeListReport report;
    const Graph g = parse_edge_list("a b\nb c\na b\n", &report);
    EXPECT_EQ(g.node_count(), 3u);
    ASSERT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
    EXPECT_EQ(g.edges()[1], (Edge{1, 2}));
    EXPECT_EQ(report.duplicates, 1u);
}

TEST(EdgeList, SelfLoopIsDropped) {
    EdgeListReport report;
    const Graph g = parse_edge_list("a a\n", &report);
    EXPECT_EQ(g.node_count(), 1u);
    EXPECT_EQ(g.edge_count(), 0u);
    EXPECT_EQ(report.self_loops, 1u);
}

TEST(EdgeList, CommentsTabsAndReversedDuplicates) {
    const Graph g = parse_edge_list("# header\nx\ty\ny x\n\n");
    EXPECT_EQ(g.node_count(), 2u);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.name(0), "x");
    EXPECT_TRUE(g.adjacent(1, 0));
}

TEST(EdgeList, MalformedLineNamesLine) {
    try {
        parse_edge_list("a b\nc\n");
        FAIL() << "expected a parse error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse);
        EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
    }
}

TEST(EdgeList, RoundTripThroughFile) {
    const Graph g = test::erdos_renyi(30, 0.2, 7);
    const auto path = std::filesystem::temp_directory_path() / "glemb_roundtrip.edges";
    write_edge_list(g, path);
    const Graph h = load_edge_list(path);
    ASSERT_EQ(h.edge_count(), g.edge_count());
    for (const Edge& e : g.edges()) {
        const auto u = h.find(g.name(e.u)), v = h.find(g.name(e.v));
        ASSERT_TRUE(u && v);
        EXPECT_TRUE(h.adjacent(*u, *v));
    }
    std::filesystem::remove(path);
}

TEST(EdgeList, MissingFileIsIoError) {
    try {
        load_edge_list("/nonexistent/graph.edges");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
}

TEST(Lcc, LargerComponentWins) {
    const Graph g = test::make_graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {5, 6}, {6, 7}});
    const Graph lcc = largest_connected_component(g);
    EXPECT_EQ(lcc.node_count(), 5u);
    EXPECT_EQ(lcc.edge_count(), 4u);
}

TEST(Lcc, ConnectedGraphIsUnchanged) {
    const Graph g = test::make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    EXPECT_EQ(largest_connected_component(g), g);
}

TEST(Lcc, SecondTriangleAndItsLabelsDiscarded) {
    const Graph g = parse_edge_list("a b\nb c\nc a\nd e\ne f\nf d\n");
    const LabelTable t = parse_labels("a\tx\nb\tx\nc\ty\n", LabelKind::Single);
    const LabelSet labels = bind_labels(t, g);
    auto [lcc, lcc_labels] = largest_connected_component(g, labels);
    EXPECT_EQ(lcc.node_count(), 3u);
    EXPECT_TRUE(lcc.find("a").has_value());
    EXPECT_FALSE(lcc.find("d").has_value());
    EXPECT_EQ(lcc_labels.annotated_count(), 3u);
}

TEST(Lcc, TieGoesToSmallestName) {
    const Graph g = parse_edge_list("z y\nb c\n");
    const Graph lcc = largest_connected_component(g);
    EXPECT_TRUE(lcc.find("b").has_value());
    EXPECT_FALSE(lcc.find("z").has_value());
}

TEST(Components, CountsMatchBfsOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = test::erdos_renyi(40, 0.04, seed);
        std::size_t count = 0;
        const auto comp = connected_components(g, &count);
        // union-find oracle
        std::vector<std::size_t> parent(g.node_count());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const Edge& e : g.edges()) parent[find(e.u)] = find(e.v);
        std::size_t roots = 0;
        for (std::size_t i = 0; i < parent.size(); ++i) roots += find(i) == i;
        EXPECT_EQ(count, roots);
        for (const Edge& e : g.edges()) EXPECT_EQ(comp[e.u], comp[e.v]);
    }
}

TEST(Labels, SingleLabelFile) {
    const LabelTable t = parse_labels("a\tx\nb\tx\nc\ty\n", LabelKind::Single);
    EXPECT_EQ(t.node_count(), 3u);
    EXPECT_EQ(t.label_names.size(), 2u);
}

TEST(Labels, MultiLabelNodeCollectsLabels) {
    const LabelTable t = parse_labels("a\tx\na\ty\n", LabelKind::Multi);
    ASSERT_EQ(t.node_count(), 1u);
    EXPECT_EQ(t.entries[0].second.size(), 2u);
}

TEST(Labels, SingleLabelDuplicateIsRejected) {
    try {
        parse_labels("a\tx\na\ty\n", LabelKind::Single);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("duplicate label for node a"), std::string::npos);
    }
}

TEST(Labels, UnknownTokensAreReported) {
    const Graph g = parse_edge_list("a b\n");
    std::vector<std::string> unknown;
    const LabelSet s = bind_labels(parse_labels("a\tx\nq\ty\n", LabelKind::Single), g, &unknown);
    EXPECT_EQ(unknown, std::vector<std::string>{"q"});
    EXPECT_TRUE(s.annotated(0));
    EXPECT_FALSE(s.annotated(1));
}
