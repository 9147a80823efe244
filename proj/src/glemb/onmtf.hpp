#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace glemb {

struct OnmtfOptions {
    int max_iterations = 500;
    /// Stop once |f_prev - f| / f_prev drops below `tolerance`.
    bool early_exit = true;
    double tolerance = 1e-7;
    double denominator_floor = 1e-12;
};

/// Rank-d SVD with a fixed sign convention: the largest-magnitude entry of
/// every left singular vector is positive. Symmetric inputs are decomposed
/// through their eigendecomposition.
struct TruncatedSvd {
    Eigen::MatrixXd u;
    Eigen::VectorXd sigma;
    Eigen::MatrixXd v;
};
TruncatedSvd truncated_svd(const Eigen::MatrixXd& x, int d);

struct Factors {
    Eigen::MatrixXd e; ///< n x d
    Eigen::MatrixXd s; ///< d x d
    Eigen::MatrixXd p; ///< m x d
};

/// E0 = |U_d|, S0 = diag(sigma_d), P0 = |V_d|. Singular values below 1e-8
/// are raised to 1e-8 so that rank-deficient inputs do not freeze updates.
Factors svd_initialize(const Eigen::MatrixXd& x, int d);

/// Result of X ~ E S P^T with non-negative factors and P^T P ~ I.
struct EmbeddingSpace {
    Eigen::MatrixXd e;
    Eigen::MatrixXd s;
    Eigen::MatrixXd p;
    std::string representation;
    int iterations = 0;
    /// ||X - E S P^T||_F^2 at iteration 0 (initialization) and after each update.
    std::vector<double> objective_trace;
    /// ||P^T P - I||_F, aligned with objective_trace.
    std::vector<double> orthogonality_trace;
    /// Iterations whose P step had to be damped or was skipped.
    int damped_p_steps = 0;
    int skipped_p_steps = 0;
    /// Stopped because a full update no longer lowered the objective.
    bool stalled = false;

    int dimension() const noexcept { return static_cast<int>(s.rows()); }
    double final_objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
    /// Node embeddings, the rows of E S.
    Eigen::MatrixXd embedding() const { return e * s; }
};

/// Default embedding dimension: 128, or max(8, n/4) for graphs below 256 nodes.
int default_dimension(std::size_t n) noexcept;

double objective(const Eigen::MatrixXd& x, const Factors& f);
/// ||P^T P - I||_F
double orthogonality(const Eigen::MatrixXd& p);

struct UpdateStep {
    Factors factors;
    Eigen::MatrixXd xp; ///< X P for the returned P
    double objective = 0.0;
    /// 1 for the plain P step, 1/2^k when damped, 0 when P was left unchanged.
    double p_exponent = 1.0;
};

/// One sweep of multiplicative updates E, S, P. `xp` must equal X P for the
/// incoming factors. The P step is kept only if, after refreshing S, the
/// objective does not increase (the undamped step must also not worsen
/// orthogonality); damped steps are tried before leaving P unchanged.
UpdateStep update_step(const Eigen::MatrixXd& x, const Factors& f, const Eigen::MatrixXd& xp, double floor);
Factors multiplicative_update(const Eigen::MatrixXd& x, const Factors& f, double floor);

/// Deterministic ONMTF from an SVD start. Throws Error(Numerical) naming the
/// iteration if a factor becomes non-finite. Runs at most max_iterations
/// updates; stops early on the relative-change threshold (if enabled) or
/// when an update fails to lower the objective.
EmbeddingSpace factorize(const Eigen::MatrixXd& x, int d, const OnmtfOptions& options = {});

inline Eigen::MatrixXd embedding_vectors(const EmbeddingSpace& space) { return space.embedding(); }

/// Dense matrix file: 8-byte magic "GLMBMAT1", uint64 rows, uint64 cols,
/// then rows*cols little-endian float64 values in row-major order.
void write_matrix(const Eigen::MatrixXd& m, const std::filesystem::path& path);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

} // namespace glemb
