/* C interface to the s-t reliability estimation library.
 *
 * Conventions: every function that can fail returns a strel_status; 0 means
 * success. On failure strel_last_error() returns a thread-local message.
 * Objects are opaque handles released with the matching *_free function.
 * All randomized entry points take an explicit 64-bit seed and are fully
 * deterministic given it.
 */

#ifndef STREL_H
#define STREL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum strel_status {
  STREL_OK = 0,
  STREL_ERR_PARSE = 1,          /* malformed input text */
  STREL_ERR_DATA = 2,           /* valid syntax, broken data contract */
  STREL_ERR_IO = 3,             /* file could not be read or written */
  STREL_ERR_EDGE_BUDGET = 4,    /* exact oracle refused: too many edges */
  STREL_ERR_INDEX_NARROW = 5,   /* K exceeds the index width */
  STREL_ERR_INSUFFICIENT = 6,   /* fewer reachable edges than strata */
  STREL_ERR_EXHAUSTED = 7,      /* workload generation ran out of sources */
  STREL_ERR_NONCONVERGENT = 8,  /* convergence step cap reached */
  STREL_ERR_LOSSY_WIDTH = 9,    /* width > 2 without the lossy flag */
  STREL_ERR_ARG = 10,           /* bad argument */
  STREL_ERR_UNKNOWN = 99
} strel_status;

/* Message for the most recent failure on this thread. */
const char* strel_last_error(void);

/* ------------------------------------------------------------------ graphs */

typedef struct strel_graph strel_graph;

/* raw_weights != 0 parses the third column as a positive weight instead of a
 * probability; a probability model must then be applied before estimation. */
strel_status strel_graph_parse(const char* text, int raw_weights, strel_graph** out);
strel_status strel_graph_load(const char* path, int raw_weights, strel_graph** out);
strel_status strel_graph_save(const strel_graph* g, const char* path);
void strel_graph_free(strel_graph* g);

uint32_t strel_graph_num_nodes(const strel_graph* g);
uint32_t strel_graph_num_edges(const strel_graph* g);

/* Dense internal id <-> original file label. */
strel_status strel_graph_node_id(const strel_graph* g, uint64_t label, uint32_t* out);
uint64_t strel_graph_node_label(const strel_graph* g, uint32_t id);

/* model: "inv-outdeg", "uniform:v1,v2,...", "exp:<mu>", "fixed:<p>".
 * Returns a new graph; the input is untouched. */
strel_status strel_graph_assign_probs(const strel_graph* g, const char* model, uint64_t seed,
                                      strel_graph** out);

/* ------------------------------------------------------------------ oracle */

/* Exact reliability by exhaustive world enumeration (<= 25 edges). */
strel_status strel_exact(const strel_graph* g, uint32_t s, uint32_t t, double* out);

/* -------------------------------------------------------------- estimators */

typedef struct strel_estimate_result {
  double value;
  uint64_t samples;
  double seconds;
  uint64_t seed;
} strel_estimate_result;

typedef struct strel_estimator_opts {
  uint64_t threshold;   /* recursive fallback sample size (default 5) */
  uint64_t stratum_r;   /* stratum edge count (default 50) */
  uint64_t index_width; /* bit-vector width L (default 1500) */
  int tree_width;       /* tree decomposition width (default 2) */
  int allow_lossy;      /* accept width > 2 (default 0) */
  const char* inner;    /* inner estimator for "probtree" (default "mc") */
} strel_estimator_opts;

void strel_estimator_opts_init(strel_estimator_opts* opts);

/* estimator: mc | bfs-sharing | rhh | rss | lp+ | lp-legacy | probtree. */
strel_status strel_estimate(const strel_graph* g, const char* estimator, uint32_t s, uint32_t t,
                            uint64_t k, uint64_t seed, const strel_estimator_opts* opts,
                            strel_estimate_result* out);

/* Chernoff sample-size bound: ceil(3/(eps^2 r) ln(2/lambda)). */
strel_status strel_chernoff_bound(double epsilon, double lambda, double r, uint64_t* out);

/* --------------------------------------------------- bit-vector edge index */

typedef struct strel_bfs_index strel_bfs_index;

strel_status strel_bfs_index_build(const strel_graph* g, uint64_t width, uint64_t seed,
                                   strel_bfs_index** out);
strel_status strel_bfs_index_refresh(strel_bfs_index* index, const strel_graph* g, uint64_t seed);
strel_status strel_bfs_index_save(const strel_bfs_index* index, const char* path);
strel_status strel_bfs_index_load(const char* path, strel_bfs_index** out);
void strel_bfs_index_free(strel_bfs_index* index);
uint64_t strel_bfs_index_width(const strel_bfs_index* index);

/* Shared BFS over the first k sampled worlds. */
strel_status strel_bfs_index_query(const strel_bfs_index* index, const strel_graph* g, uint32_t s,
                                   uint32_t t, uint64_t k, strel_estimate_result* out);

/* ------------------------------------------------------------- tree index */

typedef struct strel_probtree strel_probtree;

strel_status strel_probtree_build(const strel_graph* g, int width, int allow_lossy,
                                  strel_probtree** out);
strel_status strel_probtree_save(const strel_probtree* index, const char* path);
strel_status strel_probtree_load(const char* path, strel_probtree** out);
void strel_probtree_free(strel_probtree* index);

/* Equivalent query graph for (s, t); *s_out / *t_out are the query nodes
 * mapped into the new graph. */
strel_status strel_probtree_extract(const strel_probtree* index, uint32_t s, uint32_t t,
                                    strel_graph** out, uint32_t* s_out, uint32_t* t_out);

/* Runs `inner` (mc | lp+ | rhh | rss) on the extracted query graph. */
strel_status strel_probtree_query(const strel_probtree* index, const char* inner, uint32_t s,
                                  uint32_t t, uint64_t k, uint64_t seed,
                                  const strel_estimator_opts* opts, strel_estimate_result* out);

/* --------------------------------------------------------------- workloads */

typedef struct strel_workload strel_workload;

strel_status strel_workload_generate(const strel_graph* g, size_t n_pairs, uint32_t hops,
                                     uint64_t seed, strel_workload** out);
strel_status strel_workload_save(const strel_graph* g, const strel_workload* w, const char* path);
strel_status strel_workload_load(const strel_graph* g, const char* path, strel_workload** out);
void strel_workload_free(strel_workload* w);
size_t strel_workload_size(const strel_workload* w);
strel_status strel_workload_pair(const strel_workload* w, size_t i, uint32_t* s, uint32_t* t,
                                 uint32_t* hops);

/* ----------------------------------------------------- convergence harness */

typedef struct strel_report strel_report;

typedef struct strel_bench_params {
  uint64_t start_k;      /* default 250 */
  uint64_t step;         /* default 250 */
  double rho_threshold;  /* default 0.001 */
  uint64_t t_repeats;    /* default 100 */
  uint64_t max_steps;    /* default 20 */
  unsigned jobs;         /* default 1 */
} strel_bench_params;

void strel_bench_params_init(strel_bench_params* params);

typedef struct strel_convergence_row {
  uint64_t k;
  double r_k;
  double v_k;
  double rho;
  double seconds;
  double ms_per_sample;
} strel_convergence_row;

/* Runs the convergence protocol. Returns STREL_ERR_NONCONVERGENT when the
 * step cap was reached; the report is still produced in that case. */
strel_status strel_convergence_run(const strel_graph* g, const strel_workload* w,
                                   const char* estimator, const strel_estimator_opts* opts,
                                   const strel_bench_params* params, uint64_t seed,
                                   strel_report** out);

size_t strel_report_row_count(const strel_report* report);
strel_status strel_report_row(const strel_report* report, size_t i, strel_convergence_row* out);
int strel_report_converged(const strel_report* report);
int strel_report_converged_at_zero(const strel_report* report);
uint64_t strel_report_converged_k(const strel_report* report);
size_t strel_report_pair_count(const strel_report* report);
strel_status strel_report_pair_mean(const strel_report* report, size_t i, double* out);
void strel_report_free(strel_report* report);

/* Mean over pairs of |est - base| / base. Fails with STREL_ERR_DATA when a
 * baseline entry is zero. */
strel_status strel_relative_error(const double* estimates, const double* baseline, size_t n,
                                  double* out);

/* (1/(k(k-1))) * sum_ij |re[i] - re[j]|, k >= 2. */
strel_status strel_pairwise_deviation(const double* re, size_t k, double* out);

#ifdef __cplusplus
}
#endif

#endif /* STREL_H */
