#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "glemb/pipeline.hpp"
#include "json.hpp"

using namespace glemb;
namespace fs = std::filesystem;

namespace {

const fs::path data_dir = GLEMB_TEST_DATA_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

RunConfig toy(const std::string& extra = {}) {
    const ConfigResult r = parse_config(
        "representations = G_0, line\nmax_iterations = 60\ntasks = homophily, separability, auroc\n" + extra +
            "[network karate]\nedges = karate.edges\nlabels = karate.labels\n",
        data_dir);
    EXPECT_TRUE(r.ok());
    return *r.config;
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p;
}

} // namespace

TEST(Pipeline, ToyRunWritesReports) {
    const fs::path out = fresh("glemb_pipeline_toy");
    const PipelineSummary s = run_pipeline(toy(), {.output = out});
    ASSERT_TRUE(s.ok());
    EXPECT_EQ(s.count(PairOutcome::Status::Done), 2u);
    for (const char* slug : {"adjacency_G0", "line"}) {
        const fs::path dir = out / "networks" / "karate" / slug;
        ASSERT_TRUE(fs::exists(dir / "homophily.json")) << dir;
        EXPECT_TRUE(fs::exists(dir / "manifest.json"));
        EXPECT_TRUE(fs::exists(dir / "classification.json"));
        const auto j = nlohmann::json::parse(slurp(dir / "homophily.json"));
        EXPECT_TRUE(j.contains("gsi"));
    }
    const std::string board = slurp(out / "leaderboard.tsv");
    EXPECT_TRUE(board.starts_with("# config_hash=" + s.config_hash));
    EXPECT_NE(board.find("karate\tAdjacency(G_0)\tlinear"), std::string::npos);
    EXPECT_NE(board.find("karate\tLINE\tlinear"), std::string::npos);
    fs::remove_all(out);
}

TEST(Pipeline, RerunIsByteIdentical) {
    const fs::path a = fresh("glemb_pipeline_a"), b = fresh("glemb_pipeline_b");
    ASSERT_TRUE(run_pipeline(toy(), {.output = a, .jobs = 1}).ok());
    ASSERT_TRUE(run_pipeline(toy(), {.output = b, .jobs = 2}).ok());
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), a);
        EXPECT_EQ(slurp(entry.path()), slurp(b / rel)) << rel;
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Pipeline, ResumeSkipsFinishedPairs) {
    const fs::path out = fresh("glemb_pipeline_resume");
    ASSERT_TRUE(run_pipeline(toy(), {.output = out}).ok());
    const std::string before = slurp(out / "leaderboard.tsv");
    const PipelineSummary s = run_pipeline(toy(), {.output = out, .resume = true});
    EXPECT_EQ(s.count(PairOutcome::Status::Resumed), 2u);
    EXPECT_EQ(slurp(out / "leaderboard.tsv"), before);
    const PipelineSummary changed = run_pipeline(toy("seed = 9\n"), {.output = out, .resume = true});
    EXPECT_EQ(changed.count(PairOutcome::Status::Done), 2u);
    fs::remove_all(out);
}

TEST(Pipeline, StagesStopEarly) {
    const fs::path out = fresh("glemb_pipeline_stage");
    ASSERT_TRUE(run_pipeline(toy(), {.stage = Stage::Represent, .output = out}).ok());
    const fs::path dir = out / "networks" / "karate" / "adjacency_G0";
    EXPECT_TRUE(fs::exists(dir / "matrix.bin"));
    EXPECT_FALSE(fs::exists(dir / "manifest.json"));
    fs::remove_all(out);
    ASSERT_TRUE(run_pipeline(toy(), {.stage = Stage::Graphlets, .output = out}).ok());
    EXPECT_TRUE(fs::exists(out / "networks" / "karate" / "graphlets.json"));
    EXPECT_TRUE(fs::exists(out / "networks" / "karate" / "gdv.tsv"));
    fs::remove_all(out);
}

TEST(Pipeline, ExcludedGraphletIsReported) {
    const fs::path out = fresh("glemb_pipeline_excluded");
    const ConfigResult r = parse_config(
        "representations = G_8\ntasks = homophily\n[network karate]\nedges = karate.edges\nlabels = karate.labels\n",
        data_dir);
    ASSERT_TRUE(r.ok());
    const PipelineSummary s = run_pipeline(*r.config, {.output = out});
    EXPECT_EQ(s.count(PairOutcome::Status::Excluded), 1u);
    fs::remove_all(out);
}

TEST(Pipeline, SweepOnly) {
    const fs::path out = fresh("glemb_pipeline_sweep");
    const ConfigResult r = parse_config(
        "[sweep]\np_in = 0.4\np_out = 0.02, 0.05, 0.1\nnodes = 40\ncommunities = 2\ndimension = 4\n"
        "representations = G_0\n");
    ASSERT_TRUE(r.ok());
    const PipelineSummary s = run_pipeline(*r.config, {.output = out});
    EXPECT_TRUE(s.ok());
    EXPECT_TRUE(fs::exists(out / "sweep" / "sweep.tsv"));
    EXPECT_TRUE(fs::exists(out / "sweep" / "correlation.json"));
    EXPECT_FALSE(fs::exists(out / "networks"));
    fs::remove_all(out);
}
