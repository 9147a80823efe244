#include "glemb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <sstream>

#include "json.hpp"

#include "glemb/downstream.hpp"
#include "glemb/error.hpp"
#include "glemb/eval.hpp"
#include "glemb/graphlets.hpp"
#include "glemb/homophily.hpp"
#include "glemb/onmtf.hpp"
#include "glemb/parallel.hpp"
#include "glemb/representation.hpp"
#include "glemb/synthgen.hpp"

namespace glemb {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

int depth(Stage s) {
    switch (s) {
    case Stage::Graphlets: return 0;
    case Stage::Represent: return 1;
    case Stage::Embed: return 2;
    default: return 3;
    }
}

std::string fmt(double v, int digits = 10) {
    std::ostringstream out;
    out << std::setprecision(digits) << v;
    return out.str();
}

std::string hex(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << v;
    return out.str();
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
Json number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
        out << content;
        if (!out) fail(ErrorCode::Io, "failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_json(const fs::path& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

void write_matrix_atomic(const Eigen::MatrixXd& m, const fs::path& path) {
    fs::path tmp = path;
    tmp += ".tmp";
    write_matrix(m, tmp);
    fs::rename(tmp, path);
}

std::optional<Json> read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
}

struct Network {
    const NetworkConfig* config = nullptr;
    Graph graph;
    std::optional<LabelSet> labels;
    std::optional<LabelSet> annotations;
    std::unique_ptr<RepresentationBuilder> builder;
    int dimension = 0;
    fs::path dir;
    std::string error;
};

struct LeaderRow {
    std::string method;
    double score = 0.0;
};

struct ModulesRow {
    double gene_coverage = 0.0;
    double functional_coverage = 0.0;
    double enriched_cluster_fraction = 0.0;
};

struct PairResult {
    PairOutcome outcome;
    std::vector<LeaderRow> leaderboard;
    std::optional<ModulesRow> modules;
};

class Runner {
public:
    Runner(const RunConfig& config, const PipelineOptions& options)
        : cfg_(config), opt_(options), hash_(config.hash()), canonical_(config.canonical()) {
        summary_.output = options.output ? *options.output : config.output;
        summary_.config_hash = hash_;
    }

    PipelineSummary run() {
        const unsigned workers = opt_.jobs ? opt_.jobs : cfg_.threads;
        set_thread_count(workers);
        fs::create_directories(summary_.output);

        const bool network_tasks = cfg_.has_task(Task::Homophily) || cfg_.has_task(Task::Separability) ||
                                   cfg_.has_task(Task::Auroc) || cfg_.has_task(Task::Modules);
        const bool evaluating = depth(opt_.stage) == 3 && opt_.stage != Stage::Sweep;
        if (opt_.stage != Stage::Sweep && (!evaluating || network_tasks)) run_networks();

        if (opt_.stage == Stage::Sweep || (opt_.stage == Stage::All && cfg_.has_task(Task::Sweep))) {
            if (!cfg_.sweep) summary_.failures.push_back("sweep requested but the config has no [sweep] section");
            else run_sweep();
        }
        return std::move(summary_);
    }

private:
    void log(const std::string& msg) {
        if (!opt_.log) return;
        std::lock_guard lock(log_mu_);
        opt_.log(msg);
    }

    std::string header() const { return "# config_hash=" + hash_; }

    Json base(const std::string& network, const std::string& representation) const {
        Json j;
        j["config_hash"] = hash_;
        j["network"] = network;
        if (!representation.empty()) j["representation"] = representation;
        return j;
    }

    void load(Network& net) {
        const NetworkConfig& nc = *net.config;
        EdgeListReport report;
        Graph full = load_edge_list(nc.edges, &report);
        if (report.self_loops || report.duplicates)
            log(nc.name + ": dropped " + std::to_string(report.self_loops) + " self-loops and " +
                std::to_string(report.duplicates) + " duplicate edges");
        net.graph = nc.lcc ? largest_connected_component(full) : std::move(full);
        if (net.graph.edge_count() == 0) fail(ErrorCode::EmptyInput, nc.name + ": graph has no edges");
        auto bind = [&](const fs::path& path, LabelKind kind, const char* what) {
            std::vector<std::string> unknown;
            LabelSet set = bind_labels(load_labels(path, kind), net.graph, &unknown);
            if (!unknown.empty())
                log(nc.name + ": " + std::to_string(unknown.size()) + " " + what +
                    " entries name nodes outside the analysed graph");
            return set;
        };
        if (nc.labels) net.labels = bind(*nc.labels, nc.label_kind, "label");
        if (nc.annotations) net.annotations = bind(*nc.annotations, LabelKind::Multi, "annotation");
        const auto n = net.graph.node_count();
        net.dimension = cfg_.dimension ? std::min(*cfg_.dimension, static_cast<int>(n)) : default_dimension(n);
        net.builder = std::make_unique<RepresentationBuilder>(net.graph);
        log(nc.name + ": " + std::to_string(n) + " nodes, " + std::to_string(net.graph.edge_count()) + " edges");
    }

    void run_networks() {
        std::vector<Network> nets(cfg_.networks.size());
        for (std::size_t i = 0; i < nets.size(); ++i) {
            nets[i].config = &cfg_.networks[i];
            nets[i].dir = summary_.output / "networks" / cfg_.networks[i].name;
            try {
                load(nets[i]);
                fs::create_directories(nets[i].dir);
            } catch (const std::exception& e) {
                nets[i].error = e.what();
                summary_.failures.push_back(cfg_.networks[i].name + ": " + e.what());
                log(cfg_.networks[i].name + ": " + e.what());
            }
        }

        const unsigned workers = thread_count();
        if (opt_.stage == Stage::Graphlets) {
            parallel_chunks(nets.size(), 1, workers, [&](unsigned, std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i)
                    if (nets[i].error.empty()) graphlet_stage(nets[i]);
            });
            return;
        }

        struct Job {
            Network* net;
            const RepresentationSpec* spec;
        };
        std::vector<Job> jobs;
        for (auto& net : nets)
            for (const auto& spec : cfg_.representations) jobs.push_back({&net, &spec});
        std::vector<PairResult> results(jobs.size());
        parallel_chunks(jobs.size(), 1, workers, [&](unsigned, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) results[i] = run_pair(*jobs[i].net, *jobs[i].spec);
        });
        for (const auto& r : results) summary_.pairs.push_back(r.outcome);
        if (depth(opt_.stage) == 3) write_leaderboards(results);
    }

    void graphlet_stage(Network& net) {
        const fs::path report = net.dir / "graphlets.json";
        const std::string stage_hash = hex(fnv1a(canonical_ + "\n" + net.config->name + "\ngraphlets"));
        if (opt_.resume) {
            if (auto old = read_json(report); old && old->value("stage_hash", "") == stage_hash) {
                log(net.config->name + ": graphlets up to date");
                return;
            }
        }
        try {
            const Gdv& gdv = net.builder->gdv();
            std::ostringstream tsv;
            tsv << header() << '\n';
            for (NodeId u = 0; u < gdv.node_count(); ++u) {
                tsv << net.graph.name(u);
                for (auto c : gdv.counts[u]) tsv << '\t' << c;
                tsv << '\n';
            }
            write_atomic(net.dir / "gdv.tsv", tsv.str());
            Json j = base(net.config->name, "");
            j["stage_hash"] = stage_hash;
            j["nodes"] = net.graph.node_count();
            j["edges"] = net.graph.edge_count();
            Json cov = Json::array(), excluded = Json::array();
            for (int k = 0; k < kGraphletCount; ++k) {
                const double c = net.builder->coverage(k);
                cov.push_back({{"graphlet", "G_" + std::to_string(k)}, {"coverage", number(c)}});
                if (c < kCoverageExclusionPercent) excluded.push_back("G_" + std::to_string(k));
            }
            j["coverage"] = std::move(cov);
            j["excluded"] = std::move(excluded);
            write_json(report, j);
            log(net.config->name + ": graphlets written");
        } catch (const std::exception& e) {
            std::lock_guard lock(summary_mu_);
            summary_.failures.push_back(net.config->name + " graphlets: " + e.what());
            log(net.config->name + " graphlets: " + e.what());
        }
    }

    std::string pair_hash(const Network& net, const RepresentationSpec& spec, std::string_view stage) const {
        return hex(fnv1a(canonical_ + "\n" + net.config->name + "\n" + spec.slug() + "\n" + std::string(stage)));
    }

    static std::string_view status_name(PairOutcome::Status s) {
        switch (s) {
        case PairOutcome::Status::Done: return "done";
        case PairOutcome::Status::Resumed: return "resumed";
        case PairOutcome::Status::Excluded: return "excluded";
        case PairOutcome::Status::Failed: return "failed";
        }
        return "unknown";
    }

    std::optional<PairResult> resume_pair(const fs::path& path, const std::string& hash) const {
        auto j = read_json(path);
        if (!j || j->value("pair_hash", "") != hash) return std::nullopt;
        const std::string status = j->value("status", "");
        PairResult r;
        if (status == "excluded") r.outcome.status = PairOutcome::Status::Excluded;
        else if (status == "done") r.outcome.status = PairOutcome::Status::Resumed;
        else return std::nullopt;
        r.outcome.message = j->value("message", "");
        for (const auto& row : (*j)["leaderboard"]) r.leaderboard.push_back({row["method"], row["score"]});
        if (const auto& m = (*j)["modules"]; m.is_object())
            r.modules = ModulesRow{m["gene_coverage"], m["functional_coverage"], m["enriched_cluster_fraction"]};
        return r;
    }

    PairResult run_pair(Network& net, const RepresentationSpec& spec) {
        PairResult r;
        r.outcome.network = net.config->name;
        r.outcome.representation = spec.name();
        const std::string tag = net.config->name + "/" + spec.name();
        if (!net.error.empty()) {
            r.outcome.status = PairOutcome::Status::Failed;
            r.outcome.message = "network failed to load: " + net.error;
            return r;
        }
        const fs::path dir = net.dir / spec.slug();
        const std::string stage = std::string(depth(opt_.stage) == 3 ? "evaluate" : stage_name(opt_.stage));
        const std::string hash = pair_hash(net, spec, stage);
        if (opt_.resume) {
            if (auto old = resume_pair(dir / "pair.json", hash)) {
                old->outcome.network = r.outcome.network;
                old->outcome.representation = r.outcome.representation;
                log(tag + ": up to date");
                return *old;
            }
        }
        try {
            fs::create_directories(dir);
            compute_pair(net, spec, dir, r);
        } catch (const std::exception& e) {
            r.outcome.status = PairOutcome::Status::Failed;
            r.outcome.message = e.what();
            r.leaderboard.clear();
            r.modules.reset();
        }
        log(tag + ": " + std::string(status_name(r.outcome.status)) +
            (r.outcome.message.empty() ? "" : " (" + r.outcome.message + ")"));
        if (r.outcome.status == PairOutcome::Status::Failed) return r;

        Json j = base(r.outcome.network, r.outcome.representation);
        j["pair_hash"] = hash;
        j["stage"] = stage;
        j["status"] = status_name(r.outcome.status);
        j["message"] = r.outcome.message;
        Json rows = Json::array();
        for (const auto& row : r.leaderboard) rows.push_back({{"method", row.method}, {"score", row.score}});
        j["leaderboard"] = std::move(rows);
        if (r.modules)
            j["modules"] = {{"gene_coverage", r.modules->gene_coverage},
                            {"functional_coverage", r.modules->functional_coverage},
                            {"enriched_cluster_fraction", r.modules->enriched_cluster_fraction}};
        else
            j["modules"] = nullptr;
        write_json(dir / "pair.json", j);
        return r;
    }

    void compute_pair(Network& net, const RepresentationSpec& spec, const fs::path& dir, PairResult& r) {
        const std::string& name = net.config->name;
        std::optional<double> coverage;
        if (spec.uses_graphlet()) {
            coverage = net.builder->coverage(spec.graphlet);
            if (*coverage < kCoverageExclusionPercent) {
                r.outcome.status = PairOutcome::Status::Excluded;
                r.outcome.message = "G_" + std::to_string(spec.graphlet) + " coverage " + fmt(*coverage, 4) +
                                    "% is below " + fmt(kCoverageExclusionPercent) + "%";
                return;
            }
        }
        const MatrixRepresentation rep = net.builder->build(spec);
        for (const auto& w : rep.warnings) log(name + "/" + spec.name() + ": " + w);

        if (net.labels && cfg_.has_task(Task::Homophily)) {
            const HomophilyReport h = homophily_report(rep, *net.labels);
            Json j = base(name, rep.name());
            j["annotated_nodes"] = h.annotated_node_count;
            j["h_node"] = number(h.h_node);
            j["h_edge"] = number(h.h_edge);
            j["h_node_weighted"] = number(h.h_node_weighted);
            j["h_edge_weighted"] = number(h.h_edge_weighted);
            j["gsi"] = number(h.gsi);
            j["graphlet_coverage"] = number(coverage);
            j["warnings"] = rep.warnings;
            write_json(dir / "homophily.json", j);
        }
        if (opt_.stage == Stage::Represent) {
            write_matrix_atomic(rep.matrix, dir / "matrix.bin");
            return;
        }

        const Eigen::MatrixXd emb = embed(net, rep, dir);
        if (depth(opt_.stage) < 3) return;

        if (net.labels && cfg_.has_task(Task::Separability)) separability(net, rep, emb, dir, r);
        if (net.labels && cfg_.has_task(Task::Auroc)) {
            const AurocResult a = cosine_auroc(emb, *net.labels);
            Json j = base(name, rep.name());
            j["weighted_auroc"] = number(a.weighted_auroc);
            Json classes = Json::array();
            for (std::size_t c = 0; c < a.class_auroc.size(); ++c)
                classes.push_back({{"label", net.labels->label_name(static_cast<LabelId>(c))},
                                   {"size", a.class_size[c]},
                                   {"auroc", number(a.class_auroc[c])}});
            j["classes"] = std::move(classes);
            j["warnings"] = a.warnings;
            write_json(dir / "auroc.json", j);
            for (const auto& w : a.warnings) log(name + "/" + rep.name() + ": " + w);
            r.leaderboard.push_back({"auroc", a.weighted_auroc});
        }
        const LabelSet* annotations = net.annotations ? &*net.annotations : net.labels ? &*net.labels : nullptr;
        if (annotations && cfg_.has_task(Task::Modules)) modules(net, rep, emb, *annotations, dir, r);
    }

    Eigen::MatrixXd embed(Network& net, const MatrixRepresentation& rep, const fs::path& dir) {
        const std::string& name = net.config->name;
        const std::string embed_hash = pair_hash(net, rep.spec, "embed");
        const fs::path manifest = dir / "manifest.json";
        if (opt_.resume) {
            auto old = read_json(manifest);
            if (old && old->value("embedding_hash", "") == embed_hash && fs::exists(dir / "E.bin") &&
                fs::exists(dir / "S.bin")) {
                log(name + "/" + rep.name() + ": reusing stored factors");
                return read_matrix(dir / "E.bin") * read_matrix(dir / "S.bin");
            }
        }
        OnmtfOptions o;
        o.max_iterations = cfg_.max_iterations;
        o.early_exit = cfg_.early_exit;
        const EmbeddingSpace space = factorize(rep.matrix, net.dimension, o);
        write_matrix_atomic(space.e, dir / "E.bin");
        write_matrix_atomic(space.s, dir / "S.bin");
        write_matrix_atomic(space.p, dir / "P.bin");
        const Eigen::MatrixXd emb = space.embedding();

        std::ostringstream tsv;
        tsv << header() << '\n' << std::setprecision(17);
        for (Eigen::Index u = 0; u < emb.rows(); ++u) {
            tsv << net.graph.name(static_cast<NodeId>(u));
            for (Eigen::Index k = 0; k < emb.cols(); ++k) tsv << '\t' << emb(u, k);
            tsv << '\n';
        }
        write_atomic(dir / "embedding.tsv", tsv.str());

        Json j = base(name, rep.name());
        j["embedding_hash"] = embed_hash;
        j["nodes"] = emb.rows();
        j["dimension"] = space.dimension();
        j["iterations"] = space.iterations;
        j["max_iterations"] = o.max_iterations;
        j["early_exit"] = o.early_exit;
        j["stalled"] = space.stalled;
        j["initial_objective"] = number(space.objective_trace.front());
        j["final_objective"] = number(space.final_objective());
        j["initial_orthogonality"] = number(space.orthogonality_trace.front());
        j["final_orthogonality"] = number(space.orthogonality_trace.back());
        j["damped_p_steps"] = space.damped_p_steps;
        j["skipped_p_steps"] = space.skipped_p_steps;
        j["files"] = {{"E", "E.bin"}, {"S", "S.bin"}, {"P", "P.bin"}, {"embedding", "embedding.tsv"}};
        write_json(manifest, j);
        return emb;
    }

    void separability(const Network& net, const MatrixRepresentation& rep, const Eigen::MatrixXd& emb,
                      const fs::path& dir, PairResult& r) {
        const auto names = net.graph.names();
        const ClassificationResult linear = kfold_f1(emb, *net.labels, names, ClassifierKind::Linear, cfg_.folds);
        const std::vector<ClassificationResult> nonlinear = {
            kfold_f1(emb, *net.labels, names, ClassifierKind::NonlinearRff, cfg_.folds),
            kfold_f1(emb, *net.labels, names, ClassifierKind::Knn, cfg_.folds)};
        const SeparabilityVerdict v = classify_separability(linear, nonlinear);

        Json j = base(net.config->name, rep.name());
        j["folds"] = cfg_.folds;
        Json classifiers = Json::array();
        auto add = [&](const ClassificationResult& c) {
            Json fold = Json::array();
            for (double f : c.fold_f1) fold.push_back(number(f));
            classifiers.push_back({{"classifier", c.classifier}, {"mean_f1", number(c.mean_f1())}, {"fold_f1", fold}});
            r.leaderboard.push_back({c.classifier, c.mean_f1()});
        };
        add(linear);
        for (const auto& c : nonlinear) add(c);
        j["classifiers"] = std::move(classifiers);
        Json verdict;
        verdict["verdict"] = separability_name(v.verdict);
        verdict["linear_mean_f1"] = number(v.linear_mean_f1);
        Json cmp = Json::array();
        for (std::size_t i = 0; i < v.nonlinear_names.size(); ++i)
            cmp.push_back({{"classifier", v.nonlinear_names[i]},
                           {"mean_f1", number(v.nonlinear_mean_f1[i])},
                           {"mann_whitney_p", number(v.p_values[i])}});
        verdict["nonlinear"] = std::move(cmp);
        j["separability"] = std::move(verdict);
        write_json(dir / "classification.json", j);
    }

    void modules(const Network& net, const MatrixRepresentation& rep, const Eigen::MatrixXd& emb,
                 const LabelSet& annotations, const fs::path& dir, PairResult& r) {
        const EnrichmentResult res = module_discovery(emb, annotations);
        Json j = base(net.config->name, rep.name());
        j["cluster_count"] = res.cluster_count;
        j["tested_annotations"] = res.tested_annotations;
        j["tests"] = res.tests.size();
        j["gene_coverage"] = number(res.gene_coverage);
        j["functional_coverage"] = number(res.functional_coverage);
        j["enriched_cluster_fraction"] = number(res.enriched_cluster_fraction);
        std::vector<Json> clusters(static_cast<std::size_t>(res.cluster_count));
        for (int c = 0; c < res.cluster_count; ++c) {
            clusters[static_cast<std::size_t>(c)] = {{"cluster", c}, {"members", Json::array()}, {"enriched", Json::array()}};
        }
        for (std::size_t u = 0; u < res.clusters.size(); ++u)
            clusters[static_cast<std::size_t>(res.clusters[u])]["members"].push_back(
                net.graph.name(static_cast<NodeId>(u)));
        for (const auto& t : res.tests) {
            if (!t.enriched()) continue;
            clusters[static_cast<std::size_t>(t.cluster)]["enriched"].push_back(
                {{"annotation", annotations.label_name(t.annotation)},
                 {"hits", t.hits},
                 {"annotated_in_cluster", t.cluster_annotated},
                 {"p", number(t.p)},
                 {"p_adjusted", number(t.p_adjusted)}});
        }
        j["clusters"] = std::move(clusters);
        j["warnings"] = res.warnings;
        write_json(dir / "modules.json", j);
        for (const auto& w : res.warnings) log(net.config->name + "/" + rep.name() + ": " + w);
        r.modules = ModulesRow{res.gene_coverage, res.functional_coverage, res.enriched_cluster_fraction};
    }

    void write_leaderboards(const std::vector<PairResult>& results) {
        std::ostringstream board, mods;
        board << header() << "\nnetwork\trepresentation\tmethod\tscore\n";
        mods << header() << "\nnetwork\trepresentation\tgene_coverage\tfunctional_coverage\tenriched_cluster_fraction\n";
        bool any_modules = false;
        for (const auto& r : results) {
            for (const auto& row : r.leaderboard)
                board << r.outcome.network << '\t' << r.outcome.representation << '\t' << row.method << '\t'
                      << fmt(row.score) << '\n';
            if (r.modules) {
                any_modules = true;
                mods << r.outcome.network << '\t' << r.outcome.representation << '\t' << fmt(r.modules->gene_coverage)
                     << '\t' << fmt(r.modules->functional_coverage) << '\t'
                     << fmt(r.modules->enriched_cluster_fraction) << '\n';
            }
        }
        write_atomic(summary_.output / "leaderboard.tsv", board.str());
        if (any_modules) write_atomic(summary_.output / "modules.tsv", mods.str());
    }

    void run_sweep() {
        const SweepConfig& sc = *cfg_.sweep;
        const fs::path dir = summary_.output / "sweep";
        const fs::path report = dir / "correlation.json";
        if (opt_.resume) {
            if (auto old = read_json(report); old && old->value("config_hash", "") == hash_ &&
                                              fs::exists(dir / "sweep.tsv")) {
                log("sweep: up to date");
                return;
            }
        }
        try {
            fs::create_directories(dir);
            SweepOptions o;
            o.p_in = sc.p_in;
            o.p_out = sc.p_out;
            o.nodes = sc.nodes;
            o.communities = sc.communities;
            o.replicates = sc.replicates;
            o.dimension = sc.dimension;
            o.seed = cfg_.seed;
            o.folds = cfg_.folds;
            o.representations = sc.representations;
            o.onmtf.max_iterations = cfg_.max_iterations;
            o.onmtf.early_exit = cfg_.early_exit;
            const SweepTable table = sweep(o, [&](std::size_t done, std::size_t total) {
                log("sweep: " + std::to_string(done) + "/" + std::to_string(total) + " cells");
            });
            for (const auto& s : table.skipped) log("sweep skipped " + s);
            write_sweep_tsv(table, dir / "sweep.tsv", header());

            Json j;
            j["config_hash"] = hash_;
            j["rows"] = table.rows.size();
            j["skipped"] = table.skipped;
            Json corr = Json::array();
            if (table.rows.size() >= 3) {
                for (const auto& c : correlate_sweep(table))
                    corr.push_back({{"index", c.index},
                                    {"target", "f1_linear"},
                                    {"r", number(c.correlation.r)},
                                    {"p", number(c.correlation.p)},
                                    {"n", c.correlation.n}});
            } else {
                summary_.failures.push_back("sweep produced fewer than 3 rows; no correlation computed");
            }
            j["correlations"] = std::move(corr);
            write_json(report, j);
        } catch (const std::exception& e) {
            summary_.failures.push_back(std::string("sweep: ") + e.what());
            log(std::string("sweep: ") + e.what());
        }
    }

    const RunConfig& cfg_;
    const PipelineOptions& opt_;
    std::string hash_;
    std::string canonical_;
    PipelineSummary summary_;
    std::mutex log_mu_;
    std::mutex summary_mu_;
};

} // namespace

std::string_view stage_name(Stage s) noexcept {
    switch (s) {
    case Stage::Graphlets: return "graphlets";
    case Stage::Represent: return "represent";
    case Stage::Embed: return "embed";
    case Stage::Evaluate: return "evaluate";
    case Stage::Sweep: return "sweep";
    case Stage::All: return "all";
    }
    return "unknown";
}

std::optional<Stage> parse_stage(std::string_view name) noexcept {
    for (Stage s : {Stage::Graphlets, Stage::Represent, Stage::Embed, Stage::Evaluate, Stage::Sweep, Stage::All})
        if (stage_name(s) == name) return s;
    return std::nullopt;
}

std::size_t PipelineSummary::count(PairOutcome::Status s) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(pairs.begin(), pairs.end(), [s](const PairOutcome& p) { return p.status == s; }));
}

bool PipelineSummary::ok() const noexcept { return failures.empty() && count(PairOutcome::Status::Failed) == 0; }

PipelineSummary run_pipeline(const RunConfig& config, const PipelineOptions& options) {
    return Runner(config, options).run();
}

} // namespace glemb
