#include "strel.h"

#include <cstring>
#include <string>
#include <utility>

#include "strel/bench.hpp"
#include "strel/bfs_sharing.hpp"
#include "strel/errors.hpp"
#include "strel/estimate.hpp"
#include "strel/graph.hpp"
#include "strel/lazy.hpp"
#include "strel/mc.hpp"
#include "strel/oracle.hpp"
#include "strel/probtree.hpp"
#include "strel/random.hpp"
#include "strel/rhh.hpp"
#include "strel/rss.hpp"

struct strel_graph {
  strel::UncertainGraph g;
};
struct strel_bfs_index {
  strel::EdgeBitIndex index;
};
struct strel_probtree {
  strel::ProbTreeIndex index;
};
struct strel_workload {
  strel::Workload w;
};
struct strel_report {
  strel::ConvergenceReport report;
};

namespace {

thread_local std::string g_last_error;

strel_status set_error(strel_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
strel_status guarded(Fn&& fn) {
  try {
    fn();
    return STREL_OK;
  } catch (const strel::parse_error& e) {
    return set_error(STREL_ERR_PARSE, e.what());
  } catch (const strel::edge_budget_error& e) {
    return set_error(STREL_ERR_EDGE_BUDGET, e.what());
  } catch (const strel::index_too_narrow_error& e) {
    return set_error(STREL_ERR_INDEX_NARROW, e.what());
  } catch (const strel::insufficient_edges_error& e) {
    return set_error(STREL_ERR_INSUFFICIENT, e.what());
  } catch (const strel::workload_exhausted_error& e) {
    return set_error(STREL_ERR_EXHAUSTED, e.what());
  } catch (const strel::non_convergent_error& e) {
    return set_error(STREL_ERR_NONCONVERGENT, e.what());
  } catch (const strel::lossy_width_error& e) {
    return set_error(STREL_ERR_LOSSY_WIDTH, e.what());
  } catch (const strel::zero_baseline_error& e) {
    return set_error(STREL_ERR_DATA, e.what());
  } catch (const strel::io_error& e) {
    return set_error(STREL_ERR_IO, e.what());
  } catch (const strel::bad_argument& e) {
    return set_error(STREL_ERR_ARG, e.what());
  } catch (const strel::data_error& e) {
    return set_error(STREL_ERR_DATA, e.what());
  } catch (const strel::error& e) {
    return set_error(STREL_ERR_UNKNOWN, e.what());
  } catch (const std::exception& e) {
    return set_error(STREL_ERR_UNKNOWN, e.what());
  }
}

strel::EstimatorOptions to_options(const strel_estimator_opts* opts) {
  strel::EstimatorOptions out;
  if (!opts) return out;
  out.threshold = opts->threshold;
  out.stratum_r = opts->stratum_r;
  out.index_width = opts->index_width;
  out.tree_width = opts->tree_width;
  out.allow_lossy = opts->allow_lossy != 0;
  if (opts->inner) out.inner = opts->inner;
  return out;
}

void fill_result(strel_estimate_result* out, const strel::Estimate& est) {
  out->value = est.value;
  out->samples = est.samples_used;
  out->seconds = est.seconds;
  out->seed = est.seed;
}

}  // namespace

const char* strel_last_error(void) { return g_last_error.c_str(); }

strel_status strel_graph_parse(const char* text, int raw_weights, strel_graph** out) {
  return guarded([&] {
    if (!text || !out) throw strel::bad_argument("null argument");
    auto mode = raw_weights ? strel::ParseMode::raw_weights : strel::ParseMode::probabilities;
    *out = new strel_graph{strel::parse_edge_list(text, mode)};
  });
}

strel_status strel_graph_load(const char* path, int raw_weights, strel_graph** out) {
  return guarded([&] {
    if (!path || !out) throw strel::bad_argument("null argument");
    auto mode = raw_weights ? strel::ParseMode::raw_weights : strel::ParseMode::probabilities;
    *out = new strel_graph{strel::load_graph(path, mode)};
  });
}

strel_status strel_graph_save(const strel_graph* g, const char* path) {
  return guarded([&] {
    if (!g || !path) throw strel::bad_argument("null argument");
    strel::save_graph(g->g, path);
  });
}

void strel_graph_free(strel_graph* g) { delete g; }

uint32_t strel_graph_num_nodes(const strel_graph* g) { return g ? g->g.num_nodes() : 0; }
uint32_t strel_graph_num_edges(const strel_graph* g) { return g ? g->g.num_edges() : 0; }

strel_status strel_graph_node_id(const strel_graph* g, uint64_t label, uint32_t* out) {
  return guarded([&] {
    if (!g || !out) throw strel::bad_argument("null argument");
    auto id = g->g.id_of_label(label);
    if (!id) throw strel::data_error("unknown node label " + std::to_string(label));
    *out = *id;
  });
}

uint64_t strel_graph_node_label(const strel_graph* g, uint32_t id) {
  if (!g || id >= g->g.num_nodes()) return UINT64_MAX;
  return g->g.label_of(id);
}

strel_status strel_graph_assign_probs(const strel_graph* g, const char* model, uint64_t seed,
                                      strel_graph** out) {
  return guarded([&] {
    if (!g || !model || !out) throw strel::bad_argument("null argument");
    strel::RandomStream rng(seed);
    *out = new strel_graph{
        strel::assign_probabilities(g->g, strel::ProbabilityModel::parse(model), rng)};
  });
}

strel_status strel_exact(const strel_graph* g, uint32_t s, uint32_t t, double* out) {
  return guarded([&] {
    if (!g || !out) throw strel::bad_argument("null argument");
    *out = strel::oracle::exact_reliability(g->g, s, t);
  });
}

void strel_estimator_opts_init(strel_estimator_opts* opts) {
  if (!opts) return;
  opts->threshold = 5;
  opts->stratum_r = 50;
  opts->index_width = 1500;
  opts->tree_width = 2;
  opts->allow_lossy = 0;
  opts->inner = "mc";
}

strel_status strel_estimate(const strel_graph* g, const char* estimator, uint32_t s, uint32_t t,
                            uint64_t k, uint64_t seed, const strel_estimator_opts* opts,
                            strel_estimate_result* out) {
  return guarded([&] {
    if (!g || !estimator || !out) throw strel::bad_argument("null argument");
    strel::EstimatorFn fn = strel::make_estimator(estimator, g->g, to_options(opts));
    strel::RandomStream rng(seed);
    fill_result(out, fn(g->g, s, t, k, rng));
  });
}

strel_status strel_chernoff_bound(double epsilon, double lambda, double r, uint64_t* out) {
  return guarded([&] {
    if (!out) throw strel::bad_argument("null argument");
    *out = strel::chernoff_sample_bound(epsilon, lambda, r);
  });
}

strel_status strel_bfs_index_build(const strel_graph* g, uint64_t width, uint64_t seed,
                                   strel_bfs_index** out) {
  return guarded([&] {
    if (!g || !out) throw strel::bad_argument("null argument");
    strel::RandomStream rng(seed);
    *out = new strel_bfs_index{strel::build_index(g->g, width, rng)};
  });
}

strel_status strel_bfs_index_refresh(strel_bfs_index* index, const strel_graph* g, uint64_t seed) {
  return guarded([&] {
    if (!index || !g) throw strel::bad_argument("null argument");
    strel::RandomStream rng(seed);
    index->index = strel::refresh_index(index->index, g->g, rng);
  });
}

strel_status strel_bfs_index_save(const strel_bfs_index* index, const char* path) {
  return guarded([&] {
    if (!index || !path) throw strel::bad_argument("null argument");
    strel::save_index(index->index, path);
  });
}

strel_status strel_bfs_index_load(const char* path, strel_bfs_index** out) {
  return guarded([&] {
    if (!path || !out) throw strel::bad_argument("null argument");
    *out = new strel_bfs_index{strel::load_index(path)};
  });
}

void strel_bfs_index_free(strel_bfs_index* index) { delete index; }

uint64_t strel_bfs_index_width(const strel_bfs_index* index) {
  return index ? index->index.width() : 0;
}

strel_status strel_bfs_index_query(const strel_bfs_index* index, const strel_graph* g, uint32_t s,
                                   uint32_t t, uint64_t k, strel_estimate_result* out) {
  return guarded([&] {
    if (!index || !g || !out) throw strel::bad_argument("null argument");
    fill_result(out, strel::query(index->index, g->g, s, t, k));
  });
}

strel_status strel_probtree_build(const strel_graph* g, int width, int allow_lossy,
                                  strel_probtree** out) {
  return guarded([&] {
    if (!g || !out) throw strel::bad_argument("null argument");
    *out = new strel_probtree{strel::build_fwd_index(g->g, width, allow_lossy != 0)};
  });
}

strel_status strel_probtree_save(const strel_probtree* index, const char* path) {
  return guarded([&] {
    if (!index || !path) throw strel::bad_argument("null argument");
    strel::save_probtree(index->index, path);
  });
}

strel_status strel_probtree_load(const char* path, strel_probtree** out) {
  return guarded([&] {
    if (!path || !out) throw strel::bad_argument("null argument");
    *out = new strel_probtree{strel::load_probtree(path)};
  });
}

void strel_probtree_free(strel_probtree* index) { delete index; }

strel_status strel_probtree_extract(const strel_probtree* index, uint32_t s, uint32_t t,
                                    strel_graph** out, uint32_t* s_out, uint32_t* t_out) {
  return guarded([&] {
    if (!index || !out || !s_out || !t_out) throw strel::bad_argument("null argument");
    strel::ExtractedQuery q = strel::extract_query_graph(index->index, s, t);
    *out = new strel_graph{std::move(q.graph)};
    *s_out = q.s;
    *t_out = q.t;
  });
}

strel_status strel_probtree_query(const strel_probtree* index, const char* inner, uint32_t s,
                                  uint32_t t, uint64_t k, uint64_t seed,
                                  const strel_estimator_opts* opts, strel_estimate_result* out) {
  return guarded([&] {
    if (!index || !out) throw strel::bad_argument("null argument");
    strel::EstimatorOptions options = to_options(opts);
    if (inner) options.inner = inner;
    if (options.inner != "mc" && options.inner != "lp+" && options.inner != "rhh" &&
        options.inner != "rss")
      throw strel::bad_argument("inner estimator must be one of mc, lp+, rhh, rss");
    // Inner estimators never capture graph state, so building one against the
    // extracted graph is safe.
    strel::ExtractedQuery q = strel::extract_query_graph(index->index, s, t);
    strel::EstimatorFn fn = strel::make_estimator(options.inner, q.graph, options);
    strel::RandomStream rng(seed);
    fill_result(out, fn(q.graph, q.s, q.t, k, rng));
  });
}

strel_status strel_workload_generate(const strel_graph* g, size_t n_pairs, uint32_t hops,
                                     uint64_t seed, strel_workload** out) {
  return guarded([&] {
    if (!g || !out) throw strel::bad_argument("null argument");
    strel::RandomStream rng(seed);
    *out = new strel_workload{strel::generate_workload(g->g, n_pairs, hops, rng)};
  });
}

strel_status strel_workload_save(const strel_graph* g, const strel_workload* w, const char* path) {
  return guarded([&] {
    if (!g || !w || !path) throw strel::bad_argument("null argument");
    strel::save_workload(g->g, w->w, path);
  });
}

strel_status strel_workload_load(const strel_graph* g, const char* path, strel_workload** out) {
  return guarded([&] {
    if (!g || !path || !out) throw strel::bad_argument("null argument");
    *out = new strel_workload{strel::load_workload(g->g, path)};
  });
}

void strel_workload_free(strel_workload* w) { delete w; }

size_t strel_workload_size(const strel_workload* w) { return w ? w->w.pairs.size() : 0; }

strel_status strel_workload_pair(const strel_workload* w, size_t i, uint32_t* s, uint32_t* t,
                                 uint32_t* hops) {
  return guarded([&] {
    if (!w || !s || !t) throw strel::bad_argument("null argument");
    if (i >= w->w.pairs.size()) throw strel::bad_argument("pair index out of range");
    *s = w->w.pairs[i].s;
    *t = w->w.pairs[i].t;
    if (hops) *hops = w->w.pairs[i].hops;
  });
}

void strel_bench_params_init(strel_bench_params* params) {
  if (!params) return;
  params->start_k = 250;
  params->step = 250;
  params->rho_threshold = 1e-3;
  params->t_repeats = 100;
  params->max_steps = 20;
  params->jobs = 1;
}

strel_status strel_convergence_run(const strel_graph* g, const strel_workload* w,
                                   const char* estimator, const strel_estimator_opts* opts,
                                   const strel_bench_params* params, uint64_t seed,
                                   strel_report** out) {
  strel_status status = guarded([&] {
    if (!g || !w || !estimator || !out) throw strel::bad_argument("null argument");
    strel::ConvergenceParams cp;
    if (params) {
      cp.start_k = params->start_k;
      cp.step = params->step;
      cp.rho_threshold = params->rho_threshold;
      cp.t_repeats = params->t_repeats;
      cp.max_steps = params->max_steps;
      cp.jobs = params->jobs;
    }
    strel::EstimatorFn fn = strel::make_estimator(estimator, g->g, to_options(opts));
    strel::RandomStream rng(seed);
    *out = new strel_report{strel::run_convergence(fn, estimator, g->g, w->w, cp, rng)};
  });
  if (status != STREL_OK) return status;
  if (!(*out)->report.converged)
    return set_error(STREL_ERR_NONCONVERGENT, "convergence step cap reached");
  return STREL_OK;
}

size_t strel_report_row_count(const strel_report* report) {
  return report ? report->report.rows.size() : 0;
}

strel_status strel_report_row(const strel_report* report, size_t i, strel_convergence_row* out) {
  return guarded([&] {
    if (!report || !out) throw strel::bad_argument("null argument");
    if (i >= report->report.rows.size()) throw strel::bad_argument("row index out of range");
    const strel::ConvergenceRow& row = report->report.rows[i];
    out->k = row.k;
    out->r_k = row.r_k;
    out->v_k = row.v_k;
    out->rho = row.rho;
    out->seconds = row.seconds;
    out->ms_per_sample = row.ms_per_sample;
  });
}

int strel_report_converged(const strel_report* report) {
  return report && report->report.converged ? 1 : 0;
}

int strel_report_converged_at_zero(const strel_report* report) {
  return report && report->report.converged_at_zero ? 1 : 0;
}

uint64_t strel_report_converged_k(const strel_report* report) {
  return report ? report->report.converged_k : 0;
}

size_t strel_report_pair_count(const strel_report* report) {
  return report ? report->report.pair_means.size() : 0;
}

strel_status strel_report_pair_mean(const strel_report* report, size_t i, double* out) {
  return guarded([&] {
    if (!report || !out) throw strel::bad_argument("null argument");
    if (i >= report->report.pair_means.size())
      throw strel::bad_argument("pair index out of range");
    *out = report->report.pair_means[i];
  });
}

void strel_report_free(strel_report* report) { delete report; }

strel_status strel_relative_error(const double* estimates, const double* baseline, size_t n,
                                  double* out) {
  return guarded([&] {
    if (!estimates || !baseline || !out) throw strel::bad_argument("null argument");
    *out = strel::relative_error({estimates, n}, {baseline, n});
  });
}

strel_status strel_pairwise_deviation(const double* re, size_t k, double* out) {
  return guarded([&] {
    if (!re || !out) throw strel::bad_argument("null argument");
    *out = strel::pairwise_deviation({re, k});
  });
}
