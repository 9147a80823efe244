#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "glemb/graph.hpp"

namespace glemb {

using LabelLists = std::vector<std::vector<LabelId>>;

/// Supervision for one classifier fit: rows of `x` paired with label lists.
struct TrainingSet {
    Eigen::MatrixXd x;
    LabelLists labels;
    std::size_t label_count = 0;
    LabelKind kind = LabelKind::Single;
};

enum class ClassifierKind { Linear, NonlinearRff, Knn };

std::string_view classifier_name(ClassifierKind kind) noexcept;
ClassifierKind parse_classifier(std::string_view name);

struct LinearOptions {
    double lambda = 1e-4;
    int epochs = 300;
};

struct RffOptions {
    int features = 500;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    LinearOptions linear{};
};

struct KnnOptions {
    int k = 5;
};

class Model {
public:
    virtual ~Model() = default;
    /// n x label_count scores; larger means more likely.
    virtual Eigen::MatrixXd decision(const Eigen::MatrixXd& x) const = 0;
    /// Single-label: argmax (ties to the smallest label). Multi-label: every
    /// label whose score clears the model's threshold.
    LabelLists predict(const Eigen::MatrixXd& x) const;

protected:
    Model(LabelKind kind, double threshold) : kind_(kind), threshold_(threshold) {}

private:
    LabelKind kind_;
    double threshold_;
};

/// One-vs-rest L2-regularized hinge loss, full-batch subgradient steps with
/// step 1/(lambda t) from a zero start, features standardized on the training
/// rows. Returns the average of the second half of the iterates.
std::unique_ptr<Model> train_linear(const TrainingSet& train, const LinearOptions& options = {});
/// Random Fourier features approximating an RBF kernel (bandwidth = median
/// pairwise distance), followed by train_linear.
std::unique_ptr<Model> train_rff(const TrainingSet& train, const RffOptions& options = {});
/// k-nearest neighbors under cosine distance (ties to the smallest row).
std::unique_ptr<Model> train_knn(const TrainingSet& train, const KnnOptions& options = {});
std::unique_ptr<Model> train_classifier(ClassifierKind kind, const TrainingSet& train);

/// Support-weighted F1 over labels, computed per label one-vs-rest. For
/// single-label data this is the usual multiclass weighted F1.
double weighted_f1(const LabelLists& truth, const LabelLists& predicted, std::size_t label_count);

/// Fold index per node (-1 for unannotated). Within each class (smallest
/// label for multi-label nodes) nodes are ordered by the FNV-1a hash of
/// their external name and dealt round-robin.
std::vector<int> stratified_folds(std::span<const std::string> names, const LabelSet& labels, int k = 10);

std::uint64_t fnv1a(std::string_view s) noexcept;

struct ClassificationResult {
    std::string classifier;
    std::vector<double> fold_f1;
    double mean_f1() const;
};

ClassificationResult kfold_f1(const Eigen::MatrixXd& embeddings, const LabelSet& labels,
                              std::span<const std::string> names, ClassifierKind classifier, int k = 10);

/// Two-sided Mann-Whitney U test. Exact null distribution when there are no
/// ties and both samples have at most 10 values; otherwise the normal
/// approximation with tie and continuity correction.
double mann_whitney_u(std::span<const double> a, std::span<const double> b);

struct Correlation {
    double r = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};
/// Sample Pearson r and its two-sided p from Student's t with n-2 dof.
Correlation pearson(std::span<const double> xs, std::span<const double> ys);

enum class Separability { FullyLinear, SufficientlyLinear, NonLinear };
std::string_view separability_name(Separability s) noexcept;

struct SeparabilityVerdict {
    Separability verdict = Separability::NonLinear;
    double linear_mean_f1 = 0.0;
    std::vector<std::string> nonlinear_names;
    std::vector<double> nonlinear_mean_f1;
    std::vector<double> p_values;
};

SeparabilityVerdict classify_separability(double linear_mean_f1, std::span<const double> nonlinear_mean_f1,
                                          std::span<const double> p_values);
SeparabilityVerdict classify_separability(const ClassificationResult& linear,
                                          std::span<const ClassificationResult> nonlinear);

} // namespace glemb
