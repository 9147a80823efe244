#include <random>

#include <gtest/gtest.h>

#include "glemb/error.hpp"
#include "glemb/eval.hpp"
#include "glemb/onmtf.hpp"

using namespace glemb;

namespace {

Eigen::MatrixXd random_nonnegative(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, bool symmetric = false) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd x(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = u(rng);
    if (symmetric) x = (0.5 * (x + x.transpose())).eval();
    return x;
}

Eigen::MatrixXd two_block(Eigen::Index n) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    x.topLeftCorner(n / 2, n / 2).setOnes();
    x.bottomRightCorner(n - n / 2, n - n / 2).setOnes();
    return x;
}

void expect_non_increasing(const std::vector<double>& trace) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        ASSERT_LE(trace[i], trace[i - 1] * (1.0 + 1e-9) + 1e-12) << "iteration " << i;
}

} // namespace

TEST(Svd, IdentityIsReproducedExactly) {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Identity(6, 6);
    const Factors f = svd_initialize(x, 6);
    EXPECT_LT((f.s - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-14);
    EXPECT_LT((x - f.e * f.s * f.p.transpose()).norm(), 1e-14);
}

TEST(Svd, RankOneRecovery) {
    Eigen::VectorXd v(5);
    v << 1, 2, 0.5, 3, 1.5;
    const Eigen::MatrixXd x = v * v.transpose();
    const Factors f = svd_initialize(x, 1);
    EXPECT_LT((x - f.e * f.s * f.p.transpose()).norm(), 1e-12);
}

TEST(Svd, TruncationErrorMatchesDenseOracle) {
    for (bool symmetric : {true, false}) {
        const Eigen::MatrixXd x = random_nonnegative(10, 10, 17, symmetric);
        const TruncatedSvd t = truncated_svd(x, 3);
        const double err = (x - t.u * t.sigma.asDiagonal() * t.v.transpose()).norm();
        Eigen::JacobiSVD<Eigen::MatrixXd> oracle(x);
        const double expected = oracle.singularValues().tail(7).norm();
        EXPECT_NEAR(err, expected, 1e-10);
    }
}

TEST(Svd, SignConventionMakesLargestEntryPositive) {
    const TruncatedSvd t = truncated_svd(random_nonnegative(12, 12, 3, true), 4);
    for (Eigen::Index j = 0; j < 4; ++j) {
        Eigen::Index arg = 0;
        t.u.col(j).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(t.u(arg, j), 0.0);
    }
}

TEST(Svd, BadDimensionIsRejected) {
    EXPECT_THROW(svd_initialize(Eigen::MatrixXd::Ones(3, 3), 0), Error);
    EXPECT_THROW(svd_initialize(Eigen::MatrixXd::Ones(3, 3), 4), Error);
    EXPECT_THROW(svd_initialize(-Eigen::MatrixXd::Ones(3, 3), 1), Error);
}

TEST(Factorize, IdentityStaysAtZeroObjective) {
    const EmbeddingSpace s = factorize(Eigen::MatrixXd::Identity(5, 5), 5, {.max_iterations = 50, .early_exit = false});
    for (double v : s.objective_trace) EXPECT_LT(v, 1e-20);
}

TEST(Factorize, RandomTraceIsNonIncreasing) {
    const EmbeddingSpace s = factorize(random_nonnegative(15, 15, 5), 4, {.max_iterations = 500, .early_exit = false});
    expect_non_increasing(s.objective_trace);
    EXPECT_LE(s.final_objective(), s.objective_trace.front());
}

TEST(Factorize, FactorsStayNonNegativeAndShaped) {
    const EmbeddingSpace s = factorize(random_nonnegative(20, 12, 9), 3);
    EXPECT_EQ(s.e.rows(), 20);
    EXPECT_EQ(s.e.cols(), 3);
    EXPECT_EQ(s.s.rows(), 3);
    EXPECT_EQ(s.p.rows(), 12);
    EXPECT_GE(s.e.minCoeff(), 0.0);
    EXPECT_GE(s.s.minCoeff(), 0.0);
    EXPECT_GE(s.p.minCoeff(), 0.0);
}

TEST(Factorize, BitDeterministic) {
    const Eigen::MatrixXd x = random_nonnegative(30, 30, 2, true);
    const EmbeddingSpace a = factorize(x, 5);
    const EmbeddingSpace b = factorize(x, 5);
    EXPECT_EQ(a.e, b.e);
    EXPECT_EQ(a.s, b.s);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.objective_trace, b.objective_trace);
}

TEST(Factorize, OrthogonalityDoesNotDegrade) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const EmbeddingSpace s = factorize(random_nonnegative(25, 25, seed, true), 4, {.early_exit = false});
        EXPECT_LE(s.orthogonality_trace.back(), s.orthogonality_trace.front() + 1e-9);
    }
}

TEST(Factorize, TwoBlockEmbeddingIsLinearlySeparable) {
    const EmbeddingSpace s = factorize(two_block(20), 2);
    const Eigen::MatrixXd emb = embedding_vectors(s);
    TrainingSet t;
    t.x = emb;
    t.label_count = 2;
    for (int i = 0; i < 20; ++i) t.labels.push_back({static_cast<LabelId>(i < 10 ? 0 : 1)});
    const auto model = train_linear(t);
    EXPECT_EQ(model->predict(emb), t.labels);
}

TEST(Factorize, TwoBlockCosineStructure) {
    const Eigen::MatrixXd emb = factorize(two_block(20), 2).embedding();
    const Eigen::MatrixXd unit = emb.rowwise().normalized();
    const Eigen::MatrixXd cos = unit * unit.transpose();
    int good = 0, total = 0;
    for (int a = 0; a < 20; ++a)
        for (int b = 0; b < 20; ++b)
            for (int c = 0; c < 20; ++c) {
                if (a == b || (a < 10) != (b < 10) || (a < 10) == (c < 10)) continue;
                ++total;
                good += cos(a, b) > cos(a, c);
            }
    EXPECT_GE(good, static_cast<int>(0.95 * total));
}

TEST(Embedding, IdentityCoreGivesE) {
    EmbeddingSpace s;
    s.e = random_nonnegative(6, 3, 1);
    s.s = Eigen::MatrixXd::Identity(3, 3);
    EXPECT_EQ(embedding_vectors(s), s.e);
}

TEST(Embedding, OneDimensionIsScaledE) {
    const EmbeddingSpace s = factorize(random_nonnegative(8, 8, 4, true), 1);
    EXPECT_TRUE(s.embedding().isApprox(s.e * s.s(0, 0)));
}

TEST(DefaultDimension, SmallGraphsShrink) {
    EXPECT_EQ(default_dimension(1000), 128);
    EXPECT_EQ(default_dimension(256), 128);
    EXPECT_EQ(default_dimension(100), 25);
    EXPECT_EQ(default_dimension(20), 8);
}

TEST(MatrixFile, RoundTripIsExact) {
    const Eigen::MatrixXd x = random_nonnegative(7, 3, 8);
    const auto path = std::filesystem::temp_directory_path() / "glemb_matrix.bin";
    write_matrix(x, path);
    EXPECT_EQ(read_matrix(path), x);
    EXPECT_EQ(std::filesystem::file_size(path), 8u + 16u + 7u * 3u * 8u);
    std::filesystem::remove(path);
}
