#include "glemb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "glemb/error.hpp"
#include "glemb/parallel.hpp"

namespace glemb {

namespace {

constexpr std::size_t kBandwidthSample = 1000;
constexpr int kExactMannWhitneyMax = 10;

struct Standardizer {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd inv_scale;

    explicit Standardizer(const Eigen::MatrixXd& x) {
        const double n = static_cast<double>(x.rows());
        mean = x.colwise().mean();
        inv_scale.resize(x.cols());
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const double var = (x.col(j).array() - mean(j)).square().sum() / n;
            inv_scale(j) = var > 1e-24 ? 1.0 / std::sqrt(var) : 1.0;
        }
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
        return (x.rowwise() - mean).array().rowwise() * inv_scale.array();
    }
};

void check_training(const TrainingSet& t, bool need_two_classes) {
    if (t.x.rows() == 0) fail(ErrorCode::EmptyInput, "empty training set");
    if (static_cast<std::size_t>(t.x.rows()) != t.labels.size())
        fail(ErrorCode::InvalidArgument, "training rows and labels differ in length");
    if (t.label_count == 0) fail(ErrorCode::InvalidArgument, "training set has no labels");
    std::vector<char> seen(t.label_count, 0);
    for (const auto& ls : t.labels) {
        if (ls.empty()) fail(ErrorCode::InvalidArgument, "training node without a label");
        for (LabelId l : ls) {
            if (l >= t.label_count) fail(ErrorCode::InvalidArgument, "label id out of range");
            seen[l] = 1;
        }
    }
    if (need_two_classes && std::count(seen.begin(), seen.end(), 1) < 2)
        fail(ErrorCode::InvalidArgument, "single-class training data");
}

class LinearModel final : public Model {
public:
    LinearModel(LabelKind kind, Standardizer st, Eigen::MatrixXd w)
        : Model(kind, 0.0), st_(std::move(st)), w_(std::move(w)) {}

    Eigen::MatrixXd decision(const Eigen::MatrixXd& x) const override {
        const Eigen::MatrixXd z = st_.apply(x);
        const Eigen::Index d = z.cols();
        return (z * w_.topRows(d)).rowwise() + w_.row(d);
    }

private:
    Standardizer st_;
    Eigen::MatrixXd w_; // (d + 1) x C, last row is the bias
};

Eigen::MatrixXd rff_features(const Eigen::MatrixXd& z, const Eigen::MatrixXd& omega, const Eigen::RowVectorXd& phase) {
    const double scale = std::sqrt(2.0 / static_cast<double>(omega.cols()));
    Eigen::MatrixXd proj = (z * omega).rowwise() + phase;
    return scale * proj.array().cos().matrix();
}

class RffModel final : public Model {
public:
    RffModel(LabelKind kind, Standardizer st, Eigen::MatrixXd omega, Eigen::RowVectorXd phase,
             std::unique_ptr<Model> inner)
        : Model(kind, 0.0), st_(std::move(st)), omega_(std::move(omega)), phase_(std::move(phase)),
          inner_(std::move(inner)) {}

    Eigen::MatrixXd decision(const Eigen::MatrixXd& x) const override {
        return inner_->decision(rff_features(st_.apply(x), omega_, phase_));
    }

private:
    Standardizer st_;
    Eigen::MatrixXd omega_;
    Eigen::RowVectorXd phase_;
    std::unique_ptr<Model> inner_;
};

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out = x;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).norm();
        if (norm > 0.0) out.row(i) /= norm;
    }
    return out;
}

class KnnModel final : public Model {
public:
    KnnModel(LabelKind kind, const TrainingSet& t, int k)
        : Model(kind, 0.5), rows_(normalize_rows(t.x)), labels_(t.labels), label_count_(t.label_count),
          k_(std::min<Eigen::Index>(k, t.x.rows())) {}

    Eigen::MatrixXd decision(const Eigen::MatrixXd& x) const override {
        const Eigen::MatrixXd sim = normalize_rows(x) * rows_.transpose();
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), static_cast<Eigen::Index>(label_count_));
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(rows_.rows()));
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            std::iota(idx.begin(), idx.end(), Eigen::Index{0});
            std::partial_sort(idx.begin(), idx.begin() + k_, idx.end(), [&](Eigen::Index a, Eigen::Index b) {
                if (sim(i, a) != sim(i, b)) return sim(i, a) > sim(i, b);
                return a < b;
            });
            for (Eigen::Index j = 0; j < k_; ++j)
                for (LabelId l : labels_[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])])
                    out(i, l) += 1.0 / static_cast<double>(k_);
        }
        return out;
    }

private:
    Eigen::MatrixXd rows_;
    LabelLists labels_;
    std::size_t label_count_;
    Eigen::Index k_;
};

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// Number of arrangements giving each U value for sample sizes m, n.
std::vector<double> mann_whitney_counts(int m, int n) {
    // f[j][u]: ways with i from the first sample and j from the second.
    const int umax = m * n;
    std::vector<std::vector<double>> prev(static_cast<std::size_t>(n + 1), std::vector<double>(umax + 1, 0.0));
    for (int j = 0; j <= n; ++j) prev[static_cast<std::size_t>(j)][0] = 1.0;
    for (int i = 1; i <= m; ++i) {
        std::vector<std::vector<double>> cur(static_cast<std::size_t>(n + 1), std::vector<double>(umax + 1, 0.0));
        cur[0][0] = 1.0;
        for (int j = 1; j <= n; ++j) {
            for (int u = 0; u <= i * j; ++u) {
                // Largest value from the first sample: it exceeds all j of the second.
                double v = u >= j ? prev[static_cast<std::size_t>(j)][static_cast<std::size_t>(u - j)] : 0.0;
                v += cur[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(u)];
                cur[static_cast<std::size_t>(j)][static_cast<std::size_t>(u)] = v;
            }
        }
        prev = std::move(cur);
    }
    return prev[static_cast<std::size_t>(n)];
}

} // namespace

std::string_view classifier_name(ClassifierKind kind) noexcept {
    switch (kind) {
    case ClassifierKind::Linear: return "linear";
    case ClassifierKind::NonlinearRff: return "nonlinear-rff";
    case ClassifierKind::Knn: return "knn";
    }
    return "unknown";
}

ClassifierKind parse_classifier(std::string_view name) {
    if (name == "linear") return ClassifierKind::Linear;
    if (name == "nonlinear-rff" || name == "rff") return ClassifierKind::NonlinearRff;
    if (name == "knn") return ClassifierKind::Knn;
    fail(ErrorCode::InvalidArgument, "unknown classifier " + std::string(name));
}

LabelLists Model::predict(const Eigen::MatrixXd& x) const {
    const Eigen::MatrixXd scores = decision(x);
    LabelLists out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        auto& row = out[static_cast<std::size_t>(i)];
        if (kind_ == LabelKind::Single) {
            Eigen::Index best = 0;
            for (Eigen::Index l = 1; l < scores.cols(); ++l)
                if (scores(i, l) > scores(i, best)) best = l;
            row.push_back(static_cast<LabelId>(best));
        } else {
            for (Eigen::Index l = 0; l < scores.cols(); ++l)
                if (scores(i, l) > threshold_ || (threshold_ > 0.0 && scores(i, l) == threshold_))
                    row.push_back(static_cast<LabelId>(l));
        }
    }
    return out;
}

std::unique_ptr<Model> train_linear(const TrainingSet& train, const LinearOptions& options) {
    check_training(train, true);
    if (!(options.lambda > 0.0) || options.epochs < 1)
        fail(ErrorCode::InvalidArgument, "linear trainer needs lambda > 0 and epochs >= 1");
    Standardizer st(train.x);
    const Eigen::Index n = train.x.rows(), d = train.x.cols();
    const auto c = static_cast<Eigen::Index>(train.label_count);

    Eigen::MatrixXd z(n, d + 1);
    z.leftCols(d) = st.apply(train.x);
    z.col(d).setOnes();
    Eigen::MatrixXd y = Eigen::MatrixXd::Constant(n, c, -1.0);
    for (Eigen::Index i = 0; i < n; ++i)
        for (LabelId l : train.labels[static_cast<std::size_t>(i)]) y(i, l) = 1.0;

    const double lambda = options.lambda;
    const double radius = 1.0 / std::sqrt(lambda);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d + 1, c);
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(d + 1, c);
    const int start = options.epochs / 2 + 1;
    for (int t = 1; t <= options.epochs; ++t) {
        const Eigen::MatrixXd margin = (z * w).cwiseProduct(y);
        const Eigen::MatrixXd active = (margin.array() < 1.0).cast<double>().matrix().cwiseProduct(y);
        const double eta = 1.0 / (lambda * t);
        w = (1.0 - eta * lambda) * w + (eta / static_cast<double>(n)) * (z.transpose() * active);
        for (Eigen::Index k = 0; k < c; ++k) {
            const double norm = w.col(k).norm();
            if (norm > radius) w.col(k) *= radius / norm;
        }
        if (t >= start) avg += w;
    }
    avg /= static_cast<double>(options.epochs - start + 1);
    return std::make_unique<LinearModel>(train.kind, std::move(st), std::move(avg));
}

std::unique_ptr<Model> train_rff(const TrainingSet& train, const RffOptions& options) {
    check_training(train, true);
    if (options.features < 1) fail(ErrorCode::InvalidArgument, "feature count must be positive");
    Standardizer st(train.x);
    const Eigen::MatrixXd z = st.apply(train.x);
    const Eigen::Index n = z.rows(), d = z.cols();

    // Median pairwise distance over an evenly spaced subsample.
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(n), kBandwidthSample);
    std::vector<Eigen::Index> rows(m);
    for (std::size_t i = 0; i < m; ++i) rows[i] = static_cast<Eigen::Index>(i * static_cast<std::size_t>(n) / m);
    std::vector<double> dist;
    dist.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) dist.push_back((z.row(rows[i]) - z.row(rows[j])).norm());
    double sigma = 1.0;
    if (!dist.empty()) {
        auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
        std::nth_element(dist.begin(), mid, dist.end());
        if (*mid > 0.0) sigma = *mid;
    }

    std::mt19937_64 rng(options.seed);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    Eigen::MatrixXd omega(d, options.features);
    for (Eigen::Index j = 0; j < omega.cols(); ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            // Box-Muller keeps the draws identical across standard libraries.
            const double u1 = 1.0 - uniform(), u2 = uniform();
            omega(i, j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2) / sigma;
        }
    }
    Eigen::RowVectorXd phase(options.features);
    for (Eigen::Index j = 0; j < phase.size(); ++j) phase(j) = 2.0 * std::numbers::pi * uniform();

    TrainingSet lifted{rff_features(z, omega, phase), train.labels, train.label_count, train.kind};
    auto inner = train_linear(lifted, options.linear);
    return std::make_unique<RffModel>(train.kind, std::move(st), std::move(omega), std::move(phase), std::move(inner));
}

std::unique_ptr<Model> train_knn(const TrainingSet& train, const KnnOptions& options) {
    check_training(train, false);
    if (options.k < 1) fail(ErrorCode::InvalidArgument, "k must be positive");
    return std::make_unique<KnnModel>(train.kind, train, options.k);
}

std::unique_ptr<Model> train_classifier(ClassifierKind kind, const TrainingSet& train) {
    switch (kind) {
    case ClassifierKind::Linear: return train_linear(train);
    case ClassifierKind::NonlinearRff: return train_rff(train);
    case ClassifierKind::Knn: return train_knn(train);
    }
    fail(ErrorCode::InvalidArgument, "unknown classifier");
}

double weighted_f1(const LabelLists& truth, const LabelLists& predicted, std::size_t label_count) {
    if (truth.size() != predicted.size()) fail(ErrorCode::InvalidArgument, "prediction count mismatch");
    std::vector<std::size_t> tp(label_count, 0), fp(label_count, 0), fn(label_count, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto& t = truth[i];
        const auto& p = predicted[i];
        for (LabelId l : t) {
            if (std::find(p.begin(), p.end(), l) != p.end()) ++tp[l];
            else ++fn[l];
        }
        for (LabelId l : p)
            if (std::find(t.begin(), t.end(), l) == t.end()) ++fp[l];
    }
    double num = 0.0, support = 0.0;
    for (std::size_t l = 0; l < label_count; ++l) {
        const double s = static_cast<double>(tp[l] + fn[l]);
        if (s == 0.0) continue;
        const double f1 = 2.0 * static_cast<double>(tp[l]) / static_cast<double>(2 * tp[l] + fp[l] + fn[l]);
        num += s * f1;
        support += s;
    }
    if (support == 0.0) fail(ErrorCode::EmptyInput, "no positives for any label");
    return num / support;
}

std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<int> stratified_folds(std::span<const std::string> names, const LabelSet& labels, int k) {
    if (k < 2) fail(ErrorCode::InvalidArgument, "fold count must be at least 2");
    if (names.size() != labels.node_count()) fail(ErrorCode::InvalidArgument, "names and labels differ in length");
    std::vector<std::vector<NodeId>> by_class(labels.label_count());
    for (NodeId u = 0; u < labels.node_count(); ++u)
        if (labels.annotated(u)) by_class[labels.labels(u).front()].push_back(u);
    std::vector<int> fold(labels.node_count(), -1);
    std::size_t offset = 0;
    for (auto& members : by_class) {
        std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
            const auto ha = fnv1a(names[a]), hb = fnv1a(names[b]);
            return ha != hb ? ha < hb : names[a] < names[b];
        });
        for (std::size_t r = 0; r < members.size(); ++r)
            fold[members[r]] = static_cast<int>((r + offset) % static_cast<std::size_t>(k));
        offset = (offset + members.size()) % static_cast<std::size_t>(k);
    }
    return fold;
}

double ClassificationResult::mean_f1() const {
    if (fold_f1.empty()) return 0.0;
    return std::accumulate(fold_f1.begin(), fold_f1.end(), 0.0) / static_cast<double>(fold_f1.size());
}

ClassificationResult kfold_f1(const Eigen::MatrixXd& embeddings, const LabelSet& labels,
                              std::span<const std::string> names, ClassifierKind classifier, int k) {
    if (static_cast<std::size_t>(embeddings.rows()) != labels.node_count())
        fail(ErrorCode::InvalidArgument, "embedding rows do not match the label set");
    if (labels.annotated_count() < static_cast<std::size_t>(std::max(k, 0)))
        fail(ErrorCode::EmptyInput, "fewer annotated nodes than folds");
    const std::vector<int> fold = stratified_folds(names, labels, k);

    ClassificationResult result;
    result.classifier = std::string(classifier_name(classifier));
    result.fold_f1.assign(static_cast<std::size_t>(k), 0.0);
    parallel_chunks(static_cast<std::size_t>(k), 1, thread_count(), [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t f = b; f < e; ++f) {
            std::vector<NodeId> train_ids, test_ids;
            for (NodeId u = 0; u < labels.node_count(); ++u) {
                if (fold[u] < 0) continue;
                (static_cast<std::size_t>(fold[u]) == f ? test_ids : train_ids).push_back(u);
            }
            if (test_ids.empty()) fail(ErrorCode::EmptyInput, "fold " + std::to_string(f) + " has no test nodes");
            auto gather = [&](const std::vector<NodeId>& ids, Eigen::MatrixXd& x, LabelLists& ls) {
                x.resize(static_cast<Eigen::Index>(ids.size()), embeddings.cols());
                ls.clear();
                for (std::size_t i = 0; i < ids.size(); ++i) {
                    x.row(static_cast<Eigen::Index>(i)) = embeddings.row(ids[i]);
                    auto span = labels.labels(ids[i]);
                    ls.emplace_back(span.begin(), span.end());
                }
            };
            TrainingSet train{{}, {}, labels.label_count(), labels.kind()};
            gather(train_ids, train.x, train.labels);
            Eigen::MatrixXd test_x;
            LabelLists test_y;
            gather(test_ids, test_x, test_y);
            auto model = train_classifier(classifier, train);
            result.fold_f1[f] = weighted_f1(test_y, model->predict(test_x), labels.label_count());
        }
    });
    return result;
}

double mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) fail(ErrorCode::InvalidArgument, "Mann-Whitney needs two non-empty samples");
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
    std::vector<std::pair<double, int>> all;
    all.reserve(n);
    for (double v : a) all.emplace_back(v, 0);
    for (double v : b) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end());

    double rank_a = 0.0, tie_term = 0.0;
    bool ties = false;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && all[j].first == all[i].first) ++j;
        const double t = static_cast<double>(j - i);
        const double mid = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t r = i; r < j; ++r)
            if (all[r].second == 0) rank_a += mid;
        if (j - i > 1) {
            ties = true;
            tie_term += t * t * t - t;
        }
        i = j;
    }
    const double u = rank_a - static_cast<double>(n1 * (n1 + 1)) / 2.0;
    const double mean = static_cast<double>(n1 * n2) / 2.0;

    if (!ties && n1 <= kExactMannWhitneyMax && n2 <= kExactMannWhitneyMax) {
        const auto counts = mann_whitney_counts(static_cast<int>(n1), static_cast<int>(n2));
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        const auto ui = static_cast<std::size_t>(std::llround(u));
        double lower = 0.0, upper = 0.0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (k <= ui) lower += counts[k];
            if (k >= ui) upper += counts[k];
        }
        return std::min(1.0, 2.0 * std::min(lower, upper) / total);
    }

    const double nn = static_cast<double>(n);
    const double var = static_cast<double>(n1 * n2) / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    if (!(var > 0.0)) return 1.0;
    const double z = std::max(0.0, std::abs(u - mean) - 0.5) / std::sqrt(var);
    return std::min(1.0, 2.0 * normal_sf(z));
}

Correlation pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) fail(ErrorCode::InvalidArgument, "pearson needs equal-length inputs");
    if (xs.size() < 3) fail(ErrorCode::InvalidArgument, "pearson needs at least 3 points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) fail(ErrorCode::InvalidArgument, "pearson input is constant");
    Correlation c;
    c.n = xs.size();
    c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = n - 2.0;
    if (std::abs(c.r) >= 1.0) {
        c.p = 0.0;
    } else {
        const double t = c.r * std::sqrt(df / (1.0 - c.r * c.r));
        boost::math::students_t dist(df);
        c.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
    }
    return c;
}

std::string_view separability_name(Separability s) noexcept {
    switch (s) {
    case Separability::FullyLinear: return "fully-linear";
    case Separability::SufficientlyLinear: return "sufficiently-linear";
    case Separability::NonLinear: return "non-linear";
    }
    return "unknown";
}

SeparabilityVerdict classify_separability(double linear_mean_f1, std::span<const double> nonlinear_mean_f1,
                                          std::span<const double> p_values) {
    if (nonlinear_mean_f1.size() != p_values.size())
        fail(ErrorCode::InvalidArgument, "one p-value per non-linear result is required");
    SeparabilityVerdict v;
    v.linear_mean_f1 = linear_mean_f1;
    v.nonlinear_mean_f1.assign(nonlinear_mean_f1.begin(), nonlinear_mean_f1.end());
    v.p_values.assign(p_values.begin(), p_values.end());
    const bool all_insignificant = std::all_of(p_values.begin(), p_values.end(), [](double p) { return p >= 0.05; });
    bool sufficient = true;
    for (std::size_t i = 0; i < p_values.size(); ++i)
        sufficient = sufficient && (linear_mean_f1 >= nonlinear_mean_f1[i] || p_values[i] >= 0.05);
    if (linear_mean_f1 > 0.8 && all_insignificant) v.verdict = Separability::FullyLinear;
    else if (sufficient) v.verdict = Separability::SufficientlyLinear;
    else v.verdict = Separability::NonLinear;
    return v;
}

SeparabilityVerdict classify_separability(const ClassificationResult& linear,
                                          std::span<const ClassificationResult> nonlinear) {
    std::vector<double> means, ps;
    std::vector<std::string> names;
    for (const auto& r : nonlinear) {
        if (r.fold_f1.size() != linear.fold_f1.size())
            fail(ErrorCode::InvalidArgument, "results were computed on different folds");
        means.push_back(r.mean_f1());
        ps.push_back(mann_whitney_u(linear.fold_f1, r.fold_f1));
        names.push_back(r.classifier);
    }
    SeparabilityVerdict v = classify_separability(linear.mean_f1(), means, ps);
    v.nonlinear_names = std::move(names);
    return v;
}

} // namespace glemb
