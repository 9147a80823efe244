#include "glemb/onmtf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>

#include "glemb/error.hpp"

namespace glemb {

namespace {

constexpr double kSigmaFloor = 1e-8;
constexpr char kMatrixMagic[8] = {'G', 'L', 'M', 'B', 'M', 'A', 'T', '1'};

// Largest-magnitude entry of u positive; first index wins ties.
void fix_sign(Eigen::Ref<Eigen::VectorXd> u, Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) > best) {
            best = std::abs(u(i));
            arg = i;
        }
    }
    if (u.size() && u(arg) < 0.0) {
        u = -u;
        v = -v;
    }
}

bool is_symmetric(const Eigen::MatrixXd& x) {
    if (x.rows() != x.cols()) return false;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = j + 1; i < x.rows(); ++i)
            if (x(i, j) != x(j, i)) return false;
    return true;
}

void check_input(const Eigen::MatrixXd& x, int d) {
    if (x.size() == 0) fail(ErrorCode::EmptyInput, "cannot factorize an empty matrix");
    if (d < 1 || d > std::min(x.rows(), x.cols()))
        fail(ErrorCode::InvalidArgument, "dimension must be between 1 and " + std::to_string(std::min(x.rows(), x.cols())));
    if (!x.allFinite()) fail(ErrorCode::Numerical, "input matrix has non-finite entries");
    if (x.minCoeff() < 0.0) fail(ErrorCode::InvalidArgument, "input matrix must be non-negative");
}

void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) fail(ErrorCode::Parse, "truncated matrix header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

} // namespace

int default_dimension(std::size_t n) noexcept {
    if (n >= 256) return 128;
    return static_cast<int>(std::max<std::size_t>(8, n / 4));
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& x, int d) {
    check_input(x, d);
    TruncatedSvd out;
    const auto k = static_cast<Eigen::Index>(d);
    if (is_symmetric(x)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
        if (es.info() != Eigen::Success) fail(ErrorCode::Numerical, "eigendecomposition did not converge");
        const Eigen::VectorXd& lambda = es.eigenvalues();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(lambda.size()));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return std::abs(lambda(a)) > std::abs(lambda(b)); });
        out.u.resize(x.rows(), k);
        out.v.resize(x.rows(), k);
        out.sigma.resize(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const Eigen::Index src = order[static_cast<std::size_t>(j)];
            out.u.col(j) = es.eigenvectors().col(src);
            out.v.col(j) = lambda(src) < 0.0 ? Eigen::VectorXd(-out.u.col(j)) : Eigen::VectorXd(out.u.col(j));
            out.sigma(j) = std::abs(lambda(src));
        }
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = svd.matrixU().leftCols(k);
        out.v = svd.matrixV().leftCols(k);
        out.sigma = svd.singularValues().head(k);
    }
    for (Eigen::Index j = 0; j < k; ++j) fix_sign(out.u.col(j), out.v.col(j));
    return out;
}

Factors svd_initialize(const Eigen::MatrixXd& x, int d) {
    TruncatedSvd svd = truncated_svd(x, d);
    Factors f;
    f.e = svd.u.cwiseAbs();
    f.p = svd.v.cwiseAbs();
    f.s = svd.sigma.cwiseMax(kSigmaFloor).asDiagonal();
    return f;
}

double orthogonality(const Eigen::MatrixXd& p) {
    return (p.transpose() * p - Eigen::MatrixXd::Identity(p.cols(), p.cols())).norm();
}

double objective(const Eigen::MatrixXd& x, const Factors& f) {
    return (x - (f.e * f.s) * f.p.transpose()).squaredNorm();
}

Factors multiplicative_update(const Eigen::MatrixXd& x, const Factors& f, double floor) {
    return update_step(x, f, x * f.p, floor).factors;
}

UpdateStep update_step(const Eigen::MatrixXd& x, const Factors& f, const Eigen::MatrixXd& xp, double floor) {
    UpdateStep step;
    Factors& next = step.factors;
    const Eigen::MatrixXd ptp = f.p.transpose() * f.p;

    // E <- E o (X P S^T) / (E S P^T P S^T)
    {
        const Eigen::MatrixXd num = xp * f.s.transpose();
        const Eigen::MatrixXd den = f.e * (f.s * ptp * f.s.transpose());
        next.e = f.e.cwiseProduct(num.cwiseQuotient(den.cwiseMax(floor)));
    }
    const Eigen::MatrixXd ete = next.e.transpose() * next.e;
    // S <- S o (E^T X P) / (E^T E S P^T P)
    auto s_update = [&](const Eigen::MatrixXd& s, const Eigen::MatrixXd& xq, const Eigen::MatrixXd& qtq) {
        const Eigen::MatrixXd num = next.e.transpose() * xq;
        const Eigen::MatrixXd den = ete * s * qtq;
        return Eigen::MatrixXd(s.cwiseProduct(num.cwiseQuotient(den.cwiseMax(floor))));
    };
    next.s = s_update(f.s, xp, ptp);
    next.p = f.p;
    step.xp = xp;
    step.objective = objective(x, next);

    // P <- P o (X^T E S) / (P P^T X^T E S). After refreshing S the full step
    // must not raise the objective nor ||P^T P - I||; otherwise it is damped
    // to ratio^(1/2), ratio^(1/4), ratio^(1/8), each of which only has to
    // keep the objective, and finally skipped.
    const double orth = orthogonality(f.p);
    const Eigen::MatrixXd xtes = (x.transpose() * next.e) * next.s;
    Eigen::MatrixXd ratio = xtes.cwiseQuotient((f.p * (f.p.transpose() * xtes)).cwiseMax(floor));
    double exponent = 1.0;
    for (int attempt = 0; attempt < 4; ++attempt, exponent *= 0.5) {
        if (attempt) ratio = ratio.cwiseSqrt();
        Factors trial{next.e, {}, f.p.cwiseProduct(ratio)};
        const Eigen::MatrixXd xq = x * trial.p;
        trial.s = s_update(next.s, xq, trial.p.transpose() * trial.p);
        const double value = objective(x, trial);
        if (value <= step.objective && (attempt > 0 || orthogonality(trial.p) <= orth)) {
            next = std::move(trial);
            step.xp = xq;
            step.objective = value;
            step.p_exponent = exponent;
            return step;
        }
    }
    step.p_exponent = 0.0;
    return step;
}

EmbeddingSpace factorize(const Eigen::MatrixXd& x, int d, const OnmtfOptions& options) {
    if (options.max_iterations < 0) fail(ErrorCode::InvalidArgument, "max_iterations must be non-negative");
    Factors f = svd_initialize(x, d);
    Eigen::MatrixXd xp = x * f.p;

    EmbeddingSpace space;
    space.objective_trace.push_back(objective(x, f));
    space.orthogonality_trace.push_back(orthogonality(f.p));

    for (int it = 1; it <= options.max_iterations; ++it) {
        UpdateStep step = update_step(x, f, xp, options.denominator_floor);
        if (!step.factors.e.allFinite() || !step.factors.s.allFinite() || !step.factors.p.allFinite() ||
            !std::isfinite(step.objective))
            fail(ErrorCode::Numerical, "non-finite factor at iteration " + std::to_string(it));
        const double prev = space.objective_trace.back();
        if (step.objective > prev) {
            // Rounding noise only; the factors have stopped improving.
            space.stalled = true;
            break;
        }
        if (step.p_exponent < 1.0) ++(step.p_exponent > 0.0 ? space.damped_p_steps : space.skipped_p_steps);
        f = std::move(step.factors);
        xp = std::move(step.xp);
        space.objective_trace.push_back(step.objective);
        space.orthogonality_trace.push_back(orthogonality(f.p));
        space.iterations = it;
        if (options.early_exit) {
            const double change = prev > 0.0 ? (prev - step.objective) / prev : 0.0;
            if (change < options.tolerance) break;
        }
    }
    space.e = std::move(f.e);
    space.s = std::move(f.s);
    space.p = std::move(f.p);
    return space;
}

void write_matrix(const Eigen::MatrixXd& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out.write(kMatrixMagic, sizeof kMatrixMagic);
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) write_u64(out, std::bit_cast<std::uint64_t>(m(i, j)));
    }
    if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMatrixMagic, 8) != 0)
        fail(ErrorCode::Parse, path.string() + ": not a matrix file");
    const std::uint64_t rows = read_u64(in);
    const std::uint64_t cols = read_u64(in);
    if (rows > (1ULL << 32) || cols > (1ULL << 32)) fail(ErrorCode::Parse, path.string() + ": implausible shape");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = std::bit_cast<double>(read_u64(in));
    return m;
}

} // namespace glemb
