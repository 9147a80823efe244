#include "glemb/representation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "glemb/error.hpp"

namespace glemb {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
        auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

// "g_3" / "g3" -> 3; throws for ids outside 0..8.
std::optional<int> parse_graphlet(const std::string& tok) {
    if (tok.size() < 2 || tok[0] != 'g') return std::nullopt;
    std::string digits = tok.substr(tok[1] == '_' ? 2 : 1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    int k = std::stoi(digits);
    if (k < 0 || k >= kGraphletCount) fail(ErrorCode::InvalidArgument, "unknown graphlet id " + tok);
    return k;
}

void check_size(Eigen::Index n) {
    if (static_cast<std::size_t>(n) > kMaxDenseNodes)
        fail(ErrorCode::Unsupported, "graph has " + std::to_string(n) + " nodes; dense representations are limited to " +
                                         std::to_string(kMaxDenseNodes));
}

inline double ppmi(double x) { return x > 0.0 ? std::max(0.0, std::log(x)) : 0.0; }

template <typename Mat>
Eigen::VectorXd row_sums(const Mat& a) {
    return a * Eigen::VectorXd::Ones(a.cols());
}

Eigen::VectorXd inverse_degrees(const Eigen::VectorXd& deg, std::vector<std::string>* warnings) {
    Eigen::VectorXd dinv(deg.size());
    std::size_t zero = 0;
    for (Eigen::Index i = 0; i < deg.size(); ++i) {
        if (deg[i] > 0.0) {
            dinv[i] = 1.0 / deg[i];
        } else {
            dinv[i] = 0.0;
            ++zero;
        }
    }
    if (zero == static_cast<std::size_t>(deg.size())) fail(ErrorCode::EmptyInput, "zero-degree for all nodes");
    if (zero && warnings) warnings->push_back(std::to_string(zero) + " zero-degree nodes left as zero rows");
    return dinv;
}

template <typename Mat>
void check_input(const Mat& a) {
    if (a.rows() != a.cols()) fail(ErrorCode::InvalidArgument, "representation input must be square");
    check_size(a.rows());
}

template <typename Mat>
Eigen::MatrixXd deepwalk_impl(const Mat& a, int walk_length, std::vector<std::string>* warnings) {
    check_input(a);
    if (walk_length < 1) fail(ErrorCode::InvalidArgument, "walk length must be at least 1");
    const Eigen::VectorXd deg = row_sums(a);
    const Eigen::VectorXd dinv = inverse_degrees(deg, warnings);
    const double vol = deg.sum();

    const Mat p = dinv.asDiagonal() * a;
    Eigen::MatrixXd cur = Eigen::MatrixXd(p);
    Eigen::MatrixXd acc = cur;
    Eigen::MatrixXd next(cur.rows(), cur.cols());
    for (int r = 2; r <= walk_length; ++r) {
        next.noalias() = p * cur;
        cur.swap(next);
        acc += cur;
    }
    acc *= vol / static_cast<double>(walk_length);
    acc = acc * dinv.asDiagonal();
    // The product is symmetric in exact arithmetic; remove rounding asymmetry.
    Eigen::MatrixXd out = 0.5 * (acc + acc.transpose());
    return out.unaryExpr([](double x) { return ppmi(x); });
}

} // namespace

std::string RepresentationSpec::name() const {
    const std::string gk = "(G_" + std::to_string(graphlet) + ")";
    switch (kind) {
    case RepresentationKind::Adjacency: return "Adjacency" + gk;
    case RepresentationKind::Line: return "LINE";
    case RepresentationKind::DeepWalk: return "DeepWalk";
    case RepresentationKind::Gpmi: return "GPMI" + gk;
    case RepresentationKind::DeepGraphlet: return "DeepGraphlet" + gk;
    case RepresentationKind::GdvSim: return "GDVsim";
    case RepresentationKind::GdvPpmi: return "GDV-PPMI";
    }
    return {};
}

std::string RepresentationSpec::slug() const {
    const std::string gk = "_G" + std::to_string(graphlet);
    const std::string t = "_T" + std::to_string(walk_length);
    switch (kind) {
    case RepresentationKind::Adjacency: return "adjacency" + gk;
    case RepresentationKind::Line: return "line";
    case RepresentationKind::DeepWalk: return "deepwalk" + t;
    case RepresentationKind::Gpmi: return "gpmi" + gk;
    case RepresentationKind::DeepGraphlet: return "deepgraphlet" + gk + t;
    case RepresentationKind::GdvSim: return "gdvsim";
    case RepresentationKind::GdvPpmi: return "gdvppmi" + t;
    }
    return {};
}

bool RepresentationSpec::uses_graphlet() const noexcept {
    return kind == RepresentationKind::Adjacency || kind == RepresentationKind::Gpmi ||
           kind == RepresentationKind::DeepGraphlet;
}

bool RepresentationSpec::uses_walks() const noexcept {
    return kind == RepresentationKind::DeepWalk || kind == RepresentationKind::DeepGraphlet ||
           kind == RepresentationKind::GdvPpmi;
}

RepresentationSpec RepresentationSpec::parse(const std::string& token) {
    std::string t = lower(token);
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
    auto parts = split(t, ':');
    RepresentationSpec spec;
    const std::string& head = parts[0];
    std::size_t next = 1;
    if (auto k = parse_graphlet(head)) {
        spec.kind = RepresentationKind::Adjacency;
        spec.graphlet = *k;
    } else if (head == "adjacency" || head == "adj") {
        spec.kind = RepresentationKind::Adjacency;
    } else if (head == "line") {
        spec.kind = RepresentationKind::Line;
    } else if (head == "deepwalk") {
        spec.kind = RepresentationKind::DeepWalk;
    } else if (head == "gpmi") {
        spec.kind = RepresentationKind::Gpmi;
    } else if (head == "deepgraphlet") {
        spec.kind = RepresentationKind::DeepGraphlet;
    } else if (head == "gdvsim") {
        spec.kind = RepresentationKind::GdvSim;
    } else if (head == "gdvppmi" || head == "gdv-ppmi") {
        spec.kind = RepresentationKind::GdvPpmi;
    } else {
        fail(ErrorCode::InvalidArgument, "unknown representation " + token);
    }
    bool have_graphlet = head[0] == 'g' && spec.kind == RepresentationKind::Adjacency;
    for (; next < parts.size(); ++next) {
        const std::string& p = parts[next];
        if (auto k = parse_graphlet(p)) {
            if (!spec.uses_graphlet()) fail(ErrorCode::InvalidArgument, spec.name() + " takes no graphlet id");
            spec.graphlet = *k;
            have_graphlet = true;
        } else if (p.rfind("t=", 0) == 0) {
            if (!spec.uses_walks()) fail(ErrorCode::InvalidArgument, spec.name() + " takes no walk length");
            int v = 0;
            try {
                v = std::stoi(p.substr(2));
            } catch (const std::exception&) {
                fail(ErrorCode::InvalidArgument, "bad walk length in " + token);
            }
            if (v < 1) fail(ErrorCode::InvalidArgument, "walk length must be at least 1");
            spec.walk_length = v;
        } else {
            fail(ErrorCode::InvalidArgument, "unknown representation option " + p + " in " + token);
        }
    }
    if ((spec.kind == RepresentationKind::Gpmi || spec.kind == RepresentationKind::DeepGraphlet) && !have_graphlet)
        fail(ErrorCode::InvalidArgument, spec.name() + " needs a graphlet id, e.g. " + head + ":G_2");
    return spec;
}

SparseMatrix to_sparse(const CountMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(m.nnz());
    for (NodeId u = 0; u < m.size(); ++u) {
        auto cols = m.row_cols(u);
        auto vals = m.row_vals(u);
        for (std::size_t i = 0; i < cols.size(); ++i)
            trips.emplace_back(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(cols[i]),
                               static_cast<double>(vals[i]));
    }
    SparseMatrix s(n, n);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

SparseMatrix adjacency_matrix(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * g.edge_count());
    for (const auto& e : g.edges()) {
        trips.emplace_back(e.u, e.v, 1.0);
        trips.emplace_back(e.v, e.u, 1.0);
    }
    SparseMatrix s(n, n);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

Eigen::MatrixXd line_matrix(const SparseMatrix& a, std::vector<std::string>* warnings) {
    check_input(a);
    const Eigen::VectorXd deg = row_sums(a);
    inverse_degrees(deg, warnings);
    const double vol = deg.sum();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (Eigen::Index u = 0; u < a.outerSize(); ++u) {
        for (SparseMatrix::InnerIterator it(a, u); it; ++it) {
            if (it.value() < 0.0) fail(ErrorCode::InvalidArgument, "representation input must be non-negative");
            const Eigen::Index v = it.col();
            out(u, v) = ppmi(vol * it.value() / (deg[u] * deg[v]));
        }
    }
    return out;
}

Eigen::MatrixXd deepwalk_matrix(const SparseMatrix& a, int walk_length, std::vector<std::string>* warnings) {
    for (Eigen::Index k = 0; k < a.nonZeros(); ++k)
        if (a.valuePtr()[k] < 0.0) fail(ErrorCode::InvalidArgument, "representation input must be non-negative");
    return deepwalk_impl(a, walk_length, warnings);
}

Eigen::MatrixXd deepwalk_matrix(const Eigen::MatrixXd& a, int walk_length, std::vector<std::string>* warnings) {
    if (a.size() && a.minCoeff() < 0.0) fail(ErrorCode::InvalidArgument, "representation input must be non-negative");
    return deepwalk_impl(a, walk_length, warnings);
}

Eigen::MatrixXd gpmi_matrix(const GraphletAdjacency& ga, std::vector<std::string>* warnings) {
    if (ga.counts.empty()) fail(ErrorCode::EmptyInput, "empty graphlet adjacency for G_" + std::to_string(ga.graphlet));
    return line_matrix(to_sparse(ga.counts), warnings);
}

Eigen::MatrixXd deepgraphlet_matrix(const GraphletAdjacency& ga, int walk_length, std::vector<std::string>* warnings) {
    if (ga.counts.empty()) fail(ErrorCode::EmptyInput, "empty graphlet adjacency for G_" + std::to_string(ga.graphlet));
    return deepwalk_matrix(to_sparse(ga.binarized()), walk_length, warnings);
}

Eigen::MatrixXd gdv_ppmi_matrix(const Eigen::MatrixXd& similarity, int walk_length, std::vector<std::string>* warnings) {
    Eigen::MatrixXd a = similarity;
    a.diagonal().setZero();
    return deepwalk_matrix(a, walk_length, warnings);
}

RepresentationBuilder::RepresentationBuilder(const Graph& g, OrbitWeights weights) : g_(g), weights_(weights) {
    weights_.validate();
    check_size(static_cast<Eigen::Index>(g.node_count()));
}

const GraphletAdjacency& RepresentationBuilder::adjacency(int graphlet) {
    if (graphlet < 0 || graphlet >= kGraphletCount)
        fail(ErrorCode::InvalidArgument, "unknown graphlet id " + std::to_string(graphlet));
    std::lock_guard lock(mu_);
    auto& slot = adj_[static_cast<std::size_t>(graphlet)];
    if (!slot) slot = graphlet_adjacency(g_, graphlet);
    return *slot;
}

const Gdv& RepresentationBuilder::gdv() {
    std::lock_guard lock(mu_);
    if (!gdv_) gdv_ = count_orbits(g_);
    return *gdv_;
}

double RepresentationBuilder::coverage(int graphlet) {
    const auto& a = adjacency(graphlet);
    if (g_.node_count() == 0) return 0.0;
    std::size_t touched = 0;
    for (NodeId u = 0; u < g_.node_count(); ++u)
        if (!a.counts.row_cols(u).empty()) ++touched;
    return 100.0 * static_cast<double>(touched) / static_cast<double>(g_.node_count());
}

MatrixRepresentation RepresentationBuilder::build(const RepresentationSpec& spec) {
    MatrixRepresentation rep;
    rep.spec = spec;
    auto* w = &rep.warnings;
    switch (spec.kind) {
    case RepresentationKind::Adjacency: rep.matrix = adjacency(spec.graphlet).counts.to_dense(); break;
    case RepresentationKind::Line: rep.matrix = line_matrix(to_sparse(adjacency(0).counts), w); break;
    case RepresentationKind::DeepWalk:
        rep.matrix = deepwalk_matrix(to_sparse(adjacency(0).counts), spec.walk_length, w);
        break;
    case RepresentationKind::Gpmi: rep.matrix = gpmi_matrix(adjacency(spec.graphlet), w); break;
    case RepresentationKind::DeepGraphlet:
        rep.matrix = deepgraphlet_matrix(adjacency(spec.graphlet), spec.walk_length, w);
        break;
    case RepresentationKind::GdvSim:
        rep.matrix = gdv_similarity_matrix(gdv(), weights_);
        rep.matrix.diagonal().setZero();
        break;
    case RepresentationKind::GdvPpmi:
        rep.matrix = gdv_ppmi_matrix(gdv_similarity_matrix(gdv(), weights_), spec.walk_length, w);
        break;
    }
    return rep;
}

void write_representation_tsv(const Graph& g, const MatrixRepresentation& rep, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out << "# {\"name\":\"" << rep.name() << "\",\"n\":" << rep.size() << ",\"params\":{\"T\":"
        << (rep.spec.uses_walks() ? rep.spec.walk_length : 1) << ",\"b\":1}}\n";
    out << std::setprecision(17);
    const auto n = static_cast<Eigen::Index>(rep.size());
    for (Eigen::Index u = 0; u < n; ++u)
        for (Eigen::Index v = u; v < n; ++v)
            if (rep.matrix(u, v) != 0.0)
                out << g.name(static_cast<NodeId>(u)) << '\t' << g.name(static_cast<NodeId>(v)) << '\t'
                    << rep.matrix(u, v) << '\n';
}

} // namespace glemb
