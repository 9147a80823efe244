#ifndef GLEMB_GLEMB_H
#define GLEMB_GLEMB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GLEMB_BUILDING_LIBRARY)
#    define GLEMB_API __declspec(dllexport)
#  else
#    define GLEMB_API __declspec(dllimport)
#  endif
#else
#  define GLEMB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum glemb_status {
    GLEMB_OK = 0,
    GLEMB_INVALID_ARGUMENT = 1,
    GLEMB_IO = 2,
    GLEMB_PARSE = 3,
    GLEMB_EMPTY_INPUT = 4,
    GLEMB_NUMERICAL = 5,
    GLEMB_UNSUPPORTED = 6,
    GLEMB_INTERNAL = 7
} glemb_status;

typedef struct glemb_graph glemb_graph;
typedef struct glemb_labels glemb_labels;
typedef struct glemb_matrix glemb_matrix;
typedef struct glemb_embedding glemb_embedding;
typedef struct glemb_config glemb_config;

GLEMB_API const char* glemb_version(void);
GLEMB_API const char* glemb_status_string(glemb_status status);
/* Message of the last failed call on this thread; "" if none. */
GLEMB_API const char* glemb_last_error(void);

/* Worker threads for internal parallelism; 0 = hardware concurrency. */
GLEMB_API void glemb_set_threads(unsigned threads);

/* ---- graphs ---- */

/* Two-column edge list. With keep_lcc != 0 only the largest connected
   component is kept. */
GLEMB_API glemb_status glemb_graph_load(const char* path, int keep_lcc, glemb_graph** out);
/* Nodes are 0..node_count-1 and named by their decimal id. */
GLEMB_API glemb_status glemb_graph_from_edges(size_t node_count, size_t edge_count, const uint32_t* u,
                                              const uint32_t* v, glemb_graph** out);
/* Random partition graph with equal communities; labels receive the
   community of every node and may be NULL. */
GLEMB_API glemb_status glemb_graph_random_partition(size_t node_count, size_t communities, double p_in,
                                                    double p_out, uint64_t seed, glemb_graph** out,
                                                    glemb_labels** labels);
GLEMB_API size_t glemb_graph_node_count(const glemb_graph* g);
GLEMB_API size_t glemb_graph_edge_count(const glemb_graph* g);
GLEMB_API void glemb_graph_free(glemb_graph* g);

/* node_count * 15 orbit counts, row-major. */
GLEMB_API glemb_status glemb_orbit_counts(const glemb_graph* g, int64_t* out);
/* Percentage of nodes touching at least one instance of G_k. */
GLEMB_API glemb_status glemb_graphlet_coverage(const glemb_graph* g, int graphlet, double* out);

/* ---- labels ---- */

/* "node<TAB>label" lines bound to the nodes of g. */
GLEMB_API glemb_status glemb_labels_load(const glemb_graph* g, const char* path, int multi_label,
                                         glemb_labels** out);
GLEMB_API size_t glemb_labels_count(const glemb_labels* labels);
GLEMB_API void glemb_labels_free(glemb_labels* labels);

/* ---- representations ---- */

/* spec: "G_k", "line", "deepwalk[:T=n]", "gpmi:G_k", "deepgraphlet:G_k[:T=n]",
   "gdvsim", "gdvppmi[:T=n]". */
GLEMB_API glemb_status glemb_representation_build(const glemb_graph* g, const char* spec, glemb_matrix** out);
GLEMB_API size_t glemb_matrix_size(const glemb_matrix* m);
/* Copies the size*size entries row-major into out. */
GLEMB_API glemb_status glemb_matrix_copy(const glemb_matrix* m, double* out);
GLEMB_API void glemb_matrix_free(glemb_matrix* m);

/* Undefined indices are NaN. */
typedef struct glemb_homophily {
    double h_node;
    double h_edge;
    double h_node_weighted;
    double h_edge_weighted;
    double gsi;
} glemb_homophily;

GLEMB_API glemb_status glemb_homophily_report(const glemb_matrix* m, const glemb_labels* labels,
                                              glemb_homophily* out);

/* ---- embeddings ---- */

/* dimension 0 selects the default for the matrix size. */
GLEMB_API glemb_status glemb_factorize(const glemb_matrix* m, int dimension, int max_iterations, int early_exit,
                                       glemb_embedding** out);
GLEMB_API size_t glemb_embedding_rows(const glemb_embedding* e);
GLEMB_API int glemb_embedding_dimension(const glemb_embedding* e);
GLEMB_API int glemb_embedding_iterations(const glemb_embedding* e);
GLEMB_API double glemb_embedding_objective(const glemb_embedding* e);
/* rows * dimension values of E S, row-major. */
GLEMB_API glemb_status glemb_embedding_vectors(const glemb_embedding* e, double* out);
/* Writes E.bin, S.bin and P.bin into an existing directory. */
GLEMB_API glemb_status glemb_embedding_save(const glemb_embedding* e, const char* directory);
GLEMB_API void glemb_embedding_free(glemb_embedding* e);

/* ---- evaluation ---- */

/* classifier: "linear", "nonlinear-rff" or "knn". */
GLEMB_API glemb_status glemb_kfold_f1(const glemb_embedding* e, const glemb_graph* g, const glemb_labels* labels,
                                      const char* classifier, int folds, double* mean_f1);
GLEMB_API glemb_status glemb_cosine_auroc(const glemb_embedding* e, const glemb_labels* labels, double* out);
/* clusters 0 selects the default count. */
GLEMB_API glemb_status glemb_module_discovery(const glemb_embedding* e, const glemb_labels* annotations,
                                              int clusters, double* gene_coverage, double* functional_coverage);
GLEMB_API glemb_status glemb_hypergeom_p(size_t n, size_t x, size_t m, size_t k, double* out);

/* ---- configured runs ---- */

/* On validation failure every problem is reported, one per line, through
   glemb_last_error. */
GLEMB_API glemb_status glemb_config_load(const char* path, glemb_config** out);
/* Hex digest identifying the run; valid while the config lives. */
GLEMB_API const char* glemb_config_hash(const glemb_config* config);
GLEMB_API void glemb_config_free(glemb_config* config);

typedef void (*glemb_log_fn)(const char* message, void* user_data);

typedef struct glemb_run_options {
    /* "graphlets", "represent", "embed", "evaluate", "sweep" or "all"; NULL = "all". */
    const char* stage;
    /* Overrides the configured output directory when non-NULL. */
    const char* output;
    unsigned jobs;
    int resume;
    glemb_log_fn log;
    void* user_data;
} glemb_run_options;

typedef struct glemb_run_summary {
    size_t pairs_done;
    size_t pairs_resumed;
    size_t pairs_excluded;
    size_t pairs_failed;
    size_t other_failures;
} glemb_run_summary;

/* GLEMB_OK means the run finished; failed pairs are counted in the summary. */
GLEMB_API glemb_status glemb_run(const glemb_config* config, const glemb_run_options* options,
                                 glemb_run_summary* summary);

#ifdef __cplusplus
}
#endif

#endif
