#include "glemb/glemb.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "glemb/config.hpp"
#include "glemb/downstream.hpp"
#include "glemb/error.hpp"
#include "glemb/eval.hpp"
#include "glemb/graphlets.hpp"
#include "glemb/homophily.hpp"
#include "glemb/onmtf.hpp"
#include "glemb/parallel.hpp"
#include "glemb/pipeline.hpp"
#include "glemb/representation.hpp"
#include "glemb/synthgen.hpp"

struct glemb_graph {
    glemb::Graph graph;
};

struct glemb_labels {
    glemb::LabelSet labels;
};

struct glemb_matrix {
    glemb::MatrixRepresentation rep;
};

struct glemb_embedding {
    glemb::EmbeddingSpace space;
    Eigen::MatrixXd vectors;
};

struct glemb_config {
    glemb::RunConfig config;
    std::string hash;
};

namespace {

thread_local std::string last_error;

glemb_status record(glemb_status status, const char* what) {
    last_error = what;
    return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
glemb_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        fn();
        return GLEMB_OK;
    } catch (const glemb::Error& e) {
        return record(static_cast<glemb_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return record(GLEMB_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(GLEMB_INTERNAL, e.what());
    } catch (...) {
        return record(GLEMB_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* what) {
    if (!ok) glemb::fail(glemb::ErrorCode::InvalidArgument, what);
}

double or_nan(const std::optional<double>& v) { return v ? *v : std::numeric_limits<double>::quiet_NaN(); }

} // namespace

extern "C" {

const char* glemb_version(void) { return "0.1.0"; }

const char* glemb_status_string(glemb_status status) {
    switch (status) {
    case GLEMB_OK: return "ok";
    case GLEMB_INVALID_ARGUMENT: return "invalid argument";
    case GLEMB_IO: return "i/o error";
    case GLEMB_PARSE: return "parse error";
    case GLEMB_EMPTY_INPUT: return "empty input";
    case GLEMB_NUMERICAL: return "numerical error";
    case GLEMB_UNSUPPORTED: return "unsupported";
    case GLEMB_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* glemb_last_error(void) { return last_error.c_str(); }

void glemb_set_threads(unsigned threads) { glemb::set_thread_count(threads); }

glemb_status glemb_graph_load(const char* path, int keep_lcc, glemb_graph** out) {
    return guarded([&] {
        require(path && out, "path and out must not be null");
        glemb::Graph g = glemb::load_edge_list(path);
        if (keep_lcc) g = glemb::largest_connected_component(g);
        *out = new glemb_graph{std::move(g)};
    });
}

glemb_status glemb_graph_from_edges(size_t node_count, size_t edge_count, const uint32_t* u, const uint32_t* v,
                                    glemb_graph** out) {
    return guarded([&] {
        require(out && (edge_count == 0 || (u && v)), "edge arrays and out must not be null");
        std::vector<std::string> names(node_count);
        for (size_t i = 0; i < node_count; ++i) names[i] = std::to_string(i);
        std::vector<std::pair<glemb::NodeId, glemb::NodeId>> pairs(edge_count);
        for (size_t i = 0; i < edge_count; ++i) {
            require(u[i] < node_count && v[i] < node_count, "edge endpoint out of range");
            pairs[i] = {u[i], v[i]};
        }
        *out = new glemb_graph{glemb::Graph(std::move(names), pairs)};
    });
}

glemb_status glemb_graph_random_partition(size_t node_count, size_t communities, double p_in, double p_out,
                                          uint64_t seed, glemb_graph** out, glemb_labels** labels) {
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        glemb::PartitionSpec spec{glemb::equal_community_sizes(node_count, communities), p_in, p_out, seed};
        auto [g, l] = glemb::random_partition_graph(spec);
        auto graph = std::make_unique<glemb_graph>(glemb_graph{std::move(g)});
        if (labels) *labels = new glemb_labels{std::move(l)};
        *out = graph.release();
    });
}

size_t glemb_graph_node_count(const glemb_graph* g) { return g ? g->graph.node_count() : 0; }
size_t glemb_graph_edge_count(const glemb_graph* g) { return g ? g->graph.edge_count() : 0; }
void glemb_graph_free(glemb_graph* g) { delete g; }

glemb_status glemb_orbit_counts(const glemb_graph* g, int64_t* out) {
    return guarded([&] {
        require(g && out, "graph and out must not be null");
        const glemb::Gdv gdv = glemb::count_orbits(g->graph);
        for (const auto& row : gdv.counts)
            for (auto c : row) *out++ = c;
    });
}

glemb_status glemb_graphlet_coverage(const glemb_graph* g, int graphlet, double* out) {
    return guarded([&] {
        require(g && out, "graph and out must not be null");
        *out = glemb::graphlet_coverage(g->graph, graphlet);
    });
}

glemb_status glemb_labels_load(const glemb_graph* g, const char* path, int multi_label, glemb_labels** out) {
    return guarded([&] {
        require(g && path && out, "graph, path and out must not be null");
        const auto kind = multi_label ? glemb::LabelKind::Multi : glemb::LabelKind::Single;
        *out = new glemb_labels{glemb::bind_labels(glemb::load_labels(path, kind), g->graph)};
    });
}

size_t glemb_labels_count(const glemb_labels* labels) { return labels ? labels->labels.label_count() : 0; }
void glemb_labels_free(glemb_labels* labels) { delete labels; }

glemb_status glemb_representation_build(const glemb_graph* g, const char* spec, glemb_matrix** out) {
    return guarded([&] {
        require(g && spec && out, "graph, spec and out must not be null");
        glemb::RepresentationBuilder builder(g->graph);
        *out = new glemb_matrix{builder.build(glemb::RepresentationSpec::parse(spec))};
    });
}

size_t glemb_matrix_size(const glemb_matrix* m) { return m ? m->rep.size() : 0; }

glemb_status glemb_matrix_copy(const glemb_matrix* m, double* out) {
    return guarded([&] {
        require(m && out, "matrix and out must not be null");
        const auto& x = m->rep.matrix;
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < x.cols(); ++j) *out++ = x(i, j);
    });
}

void glemb_matrix_free(glemb_matrix* m) { delete m; }

glemb_status glemb_homophily_report(const glemb_matrix* m, const glemb_labels* labels, glemb_homophily* out) {
    return guarded([&] {
        require(m && labels && out, "matrix, labels and out must not be null");
        require(labels->labels.node_count() == m->rep.size(), "labels belong to a different graph");
        const glemb::HomophilyReport h = glemb::homophily_report(m->rep, labels->labels);
        *out = {or_nan(h.h_node), or_nan(h.h_edge), or_nan(h.h_node_weighted), or_nan(h.h_edge_weighted),
                or_nan(h.gsi)};
    });
}

glemb_status glemb_factorize(const glemb_matrix* m, int dimension, int max_iterations, int early_exit,
                             glemb_embedding** out) {
    return guarded([&] {
        require(m && out, "matrix and out must not be null");
        glemb::OnmtfOptions options;
        options.max_iterations = max_iterations;
        options.early_exit = early_exit != 0;
        const int d = dimension > 0 ? dimension : glemb::default_dimension(m->rep.size());
        auto e = std::make_unique<glemb_embedding>();
        e->space = glemb::factorize(m->rep.matrix, d, options);
        e->space.representation = m->rep.name();
        e->vectors = e->space.embedding();
        *out = e.release();
    });
}

size_t glemb_embedding_rows(const glemb_embedding* e) { return e ? static_cast<size_t>(e->vectors.rows()) : 0; }
int glemb_embedding_dimension(const glemb_embedding* e) { return e ? e->space.dimension() : 0; }
int glemb_embedding_iterations(const glemb_embedding* e) { return e ? e->space.iterations : 0; }
double glemb_embedding_objective(const glemb_embedding* e) { return e ? e->space.final_objective() : 0.0; }

glemb_status glemb_embedding_vectors(const glemb_embedding* e, double* out) {
    return guarded([&] {
        require(e && out, "embedding and out must not be null");
        for (Eigen::Index i = 0; i < e->vectors.rows(); ++i)
            for (Eigen::Index j = 0; j < e->vectors.cols(); ++j) *out++ = e->vectors(i, j);
    });
}

glemb_status glemb_embedding_save(const glemb_embedding* e, const char* directory) {
    return guarded([&] {
        require(e && directory, "embedding and directory must not be null");
        const std::filesystem::path dir(directory);
        glemb::write_matrix(e->space.e, dir / "E.bin");
        glemb::write_matrix(e->space.s, dir / "S.bin");
        glemb::write_matrix(e->space.p, dir / "P.bin");
    });
}

void glemb_embedding_free(glemb_embedding* e) { delete e; }

glemb_status glemb_kfold_f1(const glemb_embedding* e, const glemb_graph* g, const glemb_labels* labels,
                            const char* classifier, int folds, double* mean_f1) {
    return guarded([&] {
        require(e && g && labels && classifier && mean_f1, "arguments must not be null");
        require(static_cast<size_t>(e->vectors.rows()) == g->graph.node_count(),
                "embedding and graph sizes differ");
        const auto kind = glemb::parse_classifier(classifier);
        *mean_f1 = glemb::kfold_f1(e->vectors, labels->labels, g->graph.names(), kind, folds).mean_f1();
    });
}

glemb_status glemb_cosine_auroc(const glemb_embedding* e, const glemb_labels* labels, double* out) {
    return guarded([&] {
        require(e && labels && out, "arguments must not be null");
        *out = glemb::cosine_auroc(e->vectors, labels->labels).weighted_auroc;
    });
}

glemb_status glemb_module_discovery(const glemb_embedding* e, const glemb_labels* annotations, int clusters,
                                    double* gene_coverage, double* functional_coverage) {
    return guarded([&] {
        require(e && annotations && gene_coverage && functional_coverage, "arguments must not be null");
        std::optional<int> k;
        if (clusters > 0) k = clusters;
        const auto r = glemb::module_discovery(e->vectors, annotations->labels, k);
        *gene_coverage = r.gene_coverage;
        *functional_coverage = r.functional_coverage;
    });
}

glemb_status glemb_hypergeom_p(size_t n, size_t x, size_t m, size_t k, double* out) {
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        *out = glemb::hypergeom_p(n, x, m, k);
    });
}

glemb_status glemb_config_load(const char* path, glemb_config** out) {
    return guarded([&] {
        require(path && out, "path and out must not be null");
        glemb::ConfigResult r = glemb::validate_config(path);
        if (!r.ok()) {
            std::string msg;
            for (const auto& e : r.errors) msg += (msg.empty() ? "" : "\n") + e;
            glemb::fail(glemb::ErrorCode::InvalidArgument, msg);
        }
        auto c = std::make_unique<glemb_config>();
        c->hash = r.config->hash();
        c->config = std::move(*r.config);
        *out = c.release();
    });
}

const char* glemb_config_hash(const glemb_config* config) { return config ? config->hash.c_str() : ""; }
void glemb_config_free(glemb_config* config) { delete config; }

glemb_status glemb_run(const glemb_config* config, const glemb_run_options* options, glemb_run_summary* summary) {
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        glemb::PipelineOptions po;
        if (options) {
            if (options->stage) {
                auto stage = glemb::parse_stage(options->stage);
                require(stage.has_value(), "unknown stage");
                po.stage = *stage;
            }
            if (options->output) po.output = options->output;
            po.jobs = options->jobs;
            po.resume = options->resume != 0;
            if (options->log) {
                auto fn = options->log;
                void* user = options->user_data;
                po.log = [fn, user](const std::string& msg) { fn(msg.c_str(), user); };
            }
        }
        const glemb::PipelineSummary s = glemb::run_pipeline(config->config, po);
        if (po.log)
            for (const auto& f : s.failures) po.log("failed: " + f);
        if (po.log)
            for (const auto& p : s.pairs)
                if (p.status == glemb::PairOutcome::Status::Failed)
                    po.log("failed: " + p.network + "/" + p.representation + ": " + p.message);
        if (summary) {
            using S = glemb::PairOutcome::Status;
            *summary = {s.count(S::Done), s.count(S::Resumed), s.count(S::Excluded), s.count(S::Failed),
                        s.failures.size()};
        }
    });
}

} // extern "C"
