/*
 * qgossip: gossip dissemination on classical and quantum networks.
 *
 * C API of the shared library. All functions that can fail return a
 * qg_status; on error qg_last_error() holds a thread-local description.
 * Objects are opaque handles released with the matching *_free function;
 * strings returned through char** are released with qg_string_free.
 */
#ifndef QGOSSIP_H
#define QGOSSIP_H

#include <stdint.h>

#if defined(_WIN32)
#define QG_API __declspec(dllexport)
#else
#define QG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qg_status {
    QG_OK = 0,
    QG_ERROR_INVALID_PARAMETER = 1,
    QG_ERROR_CAPACITY = 2,          /* exhaustive enumeration cap exceeded */
    QG_ERROR_DISCONNECTED = 3,      /* metric undefined on a disconnected graph */
    QG_ERROR_RESOURCE_EXHAUSTED = 4 /* Bell-pair ledger ran dry */,
    QG_ERROR_PARSE = 5,
    QG_ERROR_INTERNAL = 6
} qg_status;

typedef enum qg_mode {
    QG_MODE_SINGLE_PIECE = 0,
    QG_MODE_MULTI_PIECE = 1
} qg_mode;

typedef struct qg_graph qg_graph;
typedef struct qg_matrix qg_matrix;
typedef struct qg_report qg_report;
typedef struct qg_plan qg_plan;
typedef struct qg_network qg_network;

QG_API const char *qg_version(void);
/* Message for the most recent failure on this thread; never NULL. */
QG_API const char *qg_last_error(void);
QG_API void qg_string_free(char *s);

/* ---- graphs -------------------------------------------------------- */

QG_API qg_status qg_graph_ring(int32_t n, qg_graph **out);
QG_API qg_status qg_graph_complete(int32_t n, qg_graph **out);
QG_API qg_status qg_graph_chain(int32_t n, qg_graph **out);
/* Uniform random spanning tree plus each remaining pair with probability p;
 * connected by construction, deterministic for a given (n, p, seed). */
QG_API qg_status qg_graph_random_connected(int32_t n, double p, uint64_t seed, qg_graph **out);
QG_API void qg_graph_free(qg_graph *g);

QG_API int32_t qg_graph_n(const qg_graph *g);
QG_API int64_t qg_graph_edge_count(const qg_graph *g);
QG_API int32_t qg_graph_is_connected(const qg_graph *g); /* 1 or 0 */
/* Hop distance, -1 when unreachable. */
QG_API qg_status qg_graph_distance(const qg_graph *g, int32_t u, int32_t v, int32_t *out);
/* Exact rational 2E/V as numerator/denominator (lowest terms). */
QG_API qg_status qg_graph_average_degree(const qg_graph *g, int64_t *num, int64_t *den);
QG_API qg_status qg_graph_average_path_length(const qg_graph *g, int64_t *num, int64_t *den);

/* {"n": <int>, "edges": [[i, j], ...]} with i < j. */
QG_API qg_status qg_graph_to_json(const qg_graph *g, char **out);
QG_API qg_status qg_graph_from_json(const char *json, qg_graph **out);

/* ---- transition matrices ------------------------------------------- */

QG_API qg_status qg_matrix_ring(int32_t n, qg_matrix **out);
QG_API qg_status qg_matrix_complete(int32_t n, qg_matrix **out);
QG_API qg_status qg_matrix_lazy_uniform(const qg_graph *g, qg_matrix **out);
QG_API void qg_matrix_free(qg_matrix *m);

QG_API int32_t qg_matrix_n(const qg_matrix *m);
QG_API double qg_matrix_at(const qg_matrix *m, int32_t i, int32_t j);
/* QG_OK with *diagnostic = NULL when valid; otherwise QG_OK and a malloc'd
 * description of the first violated invariant. */
QG_API qg_status qg_matrix_validate(const qg_matrix *m, char **diagnostic);

QG_API qg_status qg_matrix_to_json(const qg_matrix *m, char **out);
QG_API qg_status qg_matrix_from_json(const char *json, qg_matrix **out);

/* ---- conductance ---------------------------------------------------- */

/* cap = 0 selects the default exhaustive-enumeration cap (n <= 20). */
QG_API qg_status qg_conductance(const qg_matrix *m, int32_t cap, qg_report **out);
QG_API qg_status qg_k_conductance(const qg_matrix *m, int32_t k, int32_t cap, qg_report **out);
/* O(n*k) exact fast path for ring matrices. */
QG_API qg_status qg_circulant_arc_conductance(const qg_matrix *m, qg_report **out);
QG_API void qg_report_free(qg_report *r);

QG_API double qg_report_value(const qg_report *r);
QG_API int32_t qg_report_k(const qg_report *r);
QG_API int32_t qg_report_argmin_size(const qg_report *r);
QG_API int32_t qg_report_argmin_get(const qg_report *r, int32_t idx);
QG_API qg_status qg_report_to_json(const qg_report *r, char **out);

/* use_fast_paths permits the exact ring/complete closed forms past the cap. */
QG_API qg_status qg_mean_conductance(const qg_matrix *m, int32_t cap, int32_t use_fast_paths,
                                     double *out);

/* ---- gossip simulation ---------------------------------------------- */

typedef struct qg_estimate {
    double epsilon;
    int64_t t_estimate;
    int64_t trials;
    int64_t ci_low;  /* 95% order-statistic confidence bounds */
    int64_t ci_high;
    int32_t censored; /* 1 when some trial hit max_rounds */
} qg_estimate;

/* Monte Carlo epsilon-dissemination time. max_rounds = 0 picks the default
 * 64*n*ceil(log2 n) + 64; threads = 0 honours QGOSSIP_THREADS, then the
 * hardware. vertex_transitive skips the sup over sources (single-piece). */
QG_API qg_status qg_estimate_time(const qg_graph *g, const qg_matrix *m, qg_mode mode,
                                  double epsilon, int64_t trials, int64_t max_rounds,
                                  uint64_t seed, int32_t vertex_transitive, int32_t threads,
                                  qg_estimate *out);

/* Full per-round trace of one run, as JSON. */
QG_API qg_status qg_trace_json(const qg_graph *g, const qg_matrix *m, qg_mode mode,
                               int32_t source, uint64_t seed, int64_t max_rounds, char **out);

/* (log n + log(1/epsilon)) / conductance, a yardstick rather than a certified
 * bound. Constant 1, natural logarithms. */
QG_API qg_status qg_bound_single(const qg_matrix *m, double epsilon, int32_t cap,
                                 int32_t use_fast_paths, double *out);
/* mean_conductance * log(1/epsilon) / n. */
QG_API qg_status qg_bound_multi(const qg_matrix *m, double epsilon, int32_t cap,
                                int32_t use_fast_paths, double *out);

/* ---- quantum layer --------------------------------------------------- */

/* Concurrence of a normalized two-qubit pure state, 2|det A|. Amplitudes are
 * eight doubles: re(a00), im(a00), re(a01), ..., im(a11). */
QG_API qg_status qg_concurrence(const double *amplitudes, double *out);
/* Product of the k link concurrences of a swap chain (k >= 1); amplitudes
 * holds k consecutive states of eight doubles each. */
QG_API qg_status qg_chain_concurrence(const double *amplitudes, int32_t k, double *out);

QG_API qg_status qg_plan_update(const qg_graph *g, qg_mode mode, qg_plan **out);
QG_API void qg_plan_free(qg_plan *p);
QG_API int32_t qg_plan_replicas(const qg_plan *p);
QG_API int64_t qg_plan_total_edges(const qg_plan *p);
QG_API int64_t qg_plan_total_swaps(const qg_plan *p);
QG_API int64_t qg_plan_total_swaps_with_replicas(const qg_plan *p);
QG_API qg_status qg_plan_to_json(const qg_plan *p, char **out);

QG_API qg_status qg_apply_update(const qg_graph *g, const qg_plan *p, qg_network **out);
QG_API void qg_network_free(qg_network *net);
QG_API int64_t qg_network_ledger(const qg_network *net, int32_t u, int32_t v);
QG_API int64_t qg_network_total_ledger(const qg_network *net);
/* 1 when every vertex pair holds at least one Bell pair. */
QG_API int32_t qg_network_contact_complete(const qg_network *net);
QG_API qg_status qg_network_teleport(qg_network *net, int32_t u, int32_t v);

typedef struct qg_resource_report {
    int64_t trials;
    int64_t max_pair_draw;   /* most Bell pairs any one pair lost in a trial */
    int64_t total_teleports; /* summed over all trials */
} qg_resource_report;

/* Updates g to the complete contact graph and runs gossip over it with the
 * uniform matrix, consuming one Bell pair per teleported message. */
QG_API qg_status qg_quantum_gossip(const qg_graph *g, qg_mode mode, double epsilon,
                                   int64_t trials, uint64_t seed, int64_t max_rounds,
                                   int32_t vertex_transitive, int32_t threads, qg_estimate *out,
                                   qg_resource_report *resources);

#ifdef __cplusplus
}
#endif

#endif /* QGOSSIP_H */
