#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "glemb/graph.hpp"
#include "glemb/graphlets.hpp"

namespace glemb {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Representations are materialized densely; larger graphs are refused.
inline constexpr std::size_t kMaxDenseNodes = 20000;
inline constexpr int kDefaultWalkLength = 10;

enum class RepresentationKind { Adjacency, Line, DeepWalk, Gpmi, DeepGraphlet, GdvSim, GdvPpmi };

struct RepresentationSpec {
    RepresentationKind kind = RepresentationKind::Adjacency;
    int graphlet = 0;
    int walk_length = kDefaultWalkLength;

    /// Display name, e.g. "DeepGraphlet(G_2)".
    std::string name() const;
    /// File-system safe identifier, e.g. "deepgraphlet_G2_T10".
    std::string slug() const;
    bool uses_graphlet() const noexcept;
    bool uses_walks() const noexcept;
    /// Adjacency(G_k) is treated as an unweighted representation.
    bool weighted() const noexcept { return kind != RepresentationKind::Adjacency; }

    /// Accepts "G_k", "adjacency:G_k", "line", "deepwalk[:T=n]",
    /// "gpmi:G_k", "deepgraphlet:G_k[:T=n]", "gdvsim", "gdvppmi[:T=n]".
    static RepresentationSpec parse(const std::string& token);

    friend bool operator==(const RepresentationSpec&, const RepresentationSpec&) = default;
};

/// A named non-negative square node x node matrix.
struct MatrixRepresentation {
    RepresentationSpec spec;
    Eigen::MatrixXd matrix;
    std::vector<std::string> warnings;

    std::string name() const { return spec.name(); }
    bool weighted() const noexcept { return spec.weighted(); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

SparseMatrix to_sparse(const CountMatrix& m);
SparseMatrix adjacency_matrix(const Graph& g);

/// max(0, log(vol * a_uv / (D_u * D_v))). Zero-degree rows stay zero and
/// are reported through `warnings`.
Eigen::MatrixXd line_matrix(const SparseMatrix& a, std::vector<std::string>* warnings = nullptr);

/// max(0, log(vol * (1/T) sum_{r=1..T} (D^-1 a)^r D^-1)), b fixed at 1.
Eigen::MatrixXd deepwalk_matrix(const SparseMatrix& a, int walk_length,
                                std::vector<std::string>* warnings = nullptr);
Eigen::MatrixXd deepwalk_matrix(const Eigen::MatrixXd& a, int walk_length,
                                std::vector<std::string>* warnings = nullptr);

/// PPMI over the raw graphlet co-occurrence counts.
Eigen::MatrixXd gpmi_matrix(const GraphletAdjacency& ga, std::vector<std::string>* warnings = nullptr);
/// DeepWalk closed form over the binarized graphlet adjacency.
Eigen::MatrixXd deepgraphlet_matrix(const GraphletAdjacency& ga, int walk_length,
                                    std::vector<std::string>* warnings = nullptr);
/// DeepWalk closed form over a GDV similarity matrix (diagonal ignored).
Eigen::MatrixXd gdv_ppmi_matrix(const Eigen::MatrixXd& similarity, int walk_length = kDefaultWalkLength,
                                std::vector<std::string>* warnings = nullptr);

/// Builds representations for one graph, caching graphlet adjacencies and
/// orbit counts between requests. Safe to share between threads.
class RepresentationBuilder {
public:
    explicit RepresentationBuilder(const Graph& g, OrbitWeights weights = OrbitWeights::dependency());
    RepresentationBuilder(Graph&&, OrbitWeights = OrbitWeights::dependency()) = delete;

    MatrixRepresentation build(const RepresentationSpec& spec);

    const GraphletAdjacency& adjacency(int graphlet);
    const Gdv& gdv();
    /// Coverage of G_k in percent, from the graphlet adjacency rows.
    double coverage(int graphlet);

private:
    const Graph& g_;
    OrbitWeights weights_;
    std::array<std::optional<GraphletAdjacency>, kGraphletCount> adj_;
    std::optional<Gdv> gdv_;
    std::mutex mu_;
};

/// Coordinate TSV (u, v, value) of the upper triangle including the
/// diagonal, preceded by a "# {json}" header line with name and params.
void write_representation_tsv(const Graph& g, const MatrixRepresentation& rep,
                              const std::filesystem::path& path);

} // namespace glemb
