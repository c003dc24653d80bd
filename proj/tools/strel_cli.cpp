// Command-line front end. Everything goes through the C API in strel.h.
//
// Exit codes: 0 success, 2 usage error, 3 data/input error, 4 non-convergence.
// All wall-clock output goes to stderr so that stdout and the value columns of
// the CSV files are byte-identical across runs with the same --seed.

#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strel.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNonConvergent = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

void check(strel_status status) {
  if (status == STREL_OK) return;
  int code = status == STREL_ERR_NONCONVERGENT ? kExitNonConvergent : kExitData;
  fail(code, strel_last_error());
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("STREL_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 1;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct GraphHandle {
  strel_graph* g = nullptr;
  ~GraphHandle() { strel_graph_free(g); }
};

struct WorkloadHandle {
  strel_workload* w = nullptr;
  ~WorkloadHandle() { strel_workload_free(w); }
};

std::uint32_t node_id(strel_graph* g, std::uint64_t label) {
  std::uint32_t id = 0;
  check(strel_graph_node_id(g, label, &id));
  return id;
}

// ----------------------------------------------------------- assign-probs --

struct AssignArgs {
  std::string graph, model, out;
  std::uint64_t seed = 0;
};

int run_assign(const AssignArgs& args) {
  GraphHandle in, out;
  check(strel_graph_load(args.graph.c_str(), 1, &in.g));
  check(strel_graph_assign_probs(in.g, args.model.c_str(), args.seed, &out.g));
  check(strel_graph_save(out.g, args.out.c_str()));
  std::printf("wrote %s nodes=%u edges=%u\n", args.out.c_str(), strel_graph_num_nodes(out.g),
              strel_graph_num_edges(out.g));
  return 0;
}

// ------------------------------------------------------------ gen-workload --

struct WorkloadArgs {
  std::string graph, out;
  std::size_t pairs = 100;
  std::uint32_t hops = 2;
  std::uint64_t seed = 0;
};

int run_gen_workload(const WorkloadArgs& args) {
  GraphHandle g;
  check(strel_graph_load(args.graph.c_str(), 0, &g.g));
  WorkloadHandle w;
  check(strel_workload_generate(g.g, args.pairs, args.hops, args.seed, &w.w));
  check(strel_workload_save(g.g, w.w, args.out.c_str()));
  std::printf("wrote %s pairs=%zu hops=%u\n", args.out.c_str(), strel_workload_size(w.w),
              args.hops);
  return 0;
}

// ------------------------------------------------------------- build-index --

struct BuildIndexArgs {
  std::string graph, method, out;
  std::uint64_t width = 0;  // 0: method default (1500 bits / tree width 2)
  bool lossy = false;
  std::uint64_t seed = 0;
};

int run_build_index(const BuildIndexArgs& args) {
  GraphHandle g;
  check(strel_graph_load(args.graph.c_str(), 0, &g.g));
  auto t0 = std::chrono::steady_clock::now();
  if (args.method == "bfs-sharing") {
    std::uint64_t width = args.width ? args.width : 1500;
    strel_bfs_index* index = nullptr;
    check(strel_bfs_index_build(g.g, width, args.seed, &index));
    check(strel_bfs_index_save(index, args.out.c_str()));
    strel_bfs_index_free(index);
    std::printf("wrote %s method=bfs-sharing width=%" PRIu64 " size_bytes=%" PRIuMAX "\n",
                args.out.c_str(), width,
                static_cast<std::uintmax_t>(std::filesystem::file_size(args.out)));
  } else if (args.method == "probtree") {
    int width = args.width ? static_cast<int>(args.width) : 2;
    strel_probtree* index = nullptr;
    check(strel_probtree_build(g.g, width, args.lossy ? 1 : 0, &index));
    check(strel_probtree_save(index, args.out.c_str()));
    strel_probtree_free(index);
    std::printf("wrote %s method=probtree width=%d size_bytes=%" PRIuMAX "\n", args.out.c_str(),
                width, static_cast<std::uintmax_t>(std::filesystem::file_size(args.out)));
  } else {
    fail(kExitUsage, "unknown index method: " + args.method);
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "build_s=%g\n", seconds);
  return 0;
}

// ------------------------------------------------------------------- exact --

struct ExactArgs {
  std::string graph;
  std::uint64_t s = 0, t = 0;
};

int run_exact(const ExactArgs& args) {
  GraphHandle g;
  check(strel_graph_load(args.graph.c_str(), 0, &g.g));
  double value = 0.0;
  check(strel_exact(g.g, node_id(g.g, args.s), node_id(g.g, args.t), &value));
  std::printf("value=%s\n", fmt(value).c_str());
  return 0;
}

// ------------------------------------------------------------------- query --

struct QueryArgs {
  std::string graph, estimator = "mc", inner = "mc", index;
  std::uint64_t s = 0, t = 0;
  std::uint64_t k = 1000;
  std::uint64_t seed = 0;
  std::uint64_t threshold = 5, r = 50, width = 1500;
  bool lossy = false;
};

int run_query(const QueryArgs& args) {
  GraphHandle g;
  check(strel_graph_load(args.graph.c_str(), 0, &g.g));
  std::uint32_t s = node_id(g.g, args.s), t = node_id(g.g, args.t);

  strel_estimator_opts opts;
  strel_estimator_opts_init(&opts);
  opts.threshold = args.threshold;
  opts.stratum_r = args.r;
  opts.index_width = args.width;
  opts.allow_lossy = args.lossy ? 1 : 0;
  opts.inner = args.inner.c_str();

  strel_estimate_result result{};
  if (!args.index.empty()) {
    if (args.estimator == "bfs-sharing") {
      strel_bfs_index* index = nullptr;
      check(strel_bfs_index_load(args.index.c_str(), &index));
      strel_status status = strel_bfs_index_query(index, g.g, s, t, args.k, &result);
      strel_bfs_index_free(index);
      check(status);
    } else if (args.estimator == "probtree") {
      strel_probtree* index = nullptr;
      check(strel_probtree_load(args.index.c_str(), &index));
      strel_status status =
          strel_probtree_query(index, args.inner.c_str(), s, t, args.k, args.seed, &opts, &result);
      strel_probtree_free(index);
      check(status);
    } else {
      fail(kExitData, "--index applies only to bfs-sharing and probtree, not " + args.estimator);
    }
  } else {
    check(strel_estimate(g.g, args.estimator.c_str(), s, t, args.k, args.seed, &opts, &result));
  }

  std::printf("estimator=%s s=%" PRIu64 " t=%" PRIu64 " k=%" PRIu64 " seed=%" PRIu64
              " value=%s samples=%" PRIu64 "\n",
              args.estimator.c_str(), args.s, args.t, args.k, args.seed,
              fmt(result.value).c_str(), result.samples);
  std::fprintf(stderr, "seconds=%g\n", result.seconds);
  return 0;
}

// ------------------------------------------------------------------- bench --

struct BenchArgs {
  std::string graph, workload, out = ".";
  std::string estimators = "all";
  std::string inner = "mc";
  std::uint64_t start_k = 250, step = 250, t_repeats = 100, max_steps = 20;
  double rho = 1e-3;
  std::uint64_t threshold = 5, r = 50, width = 1500;
  unsigned jobs = 1;
  bool no_timing = false;
  std::uint64_t seed = 0;
};

std::vector<std::string> split_estimators(const std::string& spec) {
  if (spec == "all")
    return {"mc", "bfs-sharing", "rhh", "rss", "lp+", "probtree"};
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    out.push_back(spec.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct ReportData {
  std::vector<strel_convergence_row> rows;
  bool converged = false;
  bool at_zero = false;
  std::uint64_t converged_k = 0;
  std::vector<double> pair_means;
};

ReportData run_one(strel_graph* g, strel_workload* w, const std::string& name,
                   const strel_estimator_opts& opts, const strel_bench_params& params,
                   std::uint64_t seed) {
  strel_report* report = nullptr;
  strel_status status = strel_convergence_run(g, w, name.c_str(), &opts, &params, seed, &report);
  if (status != STREL_OK && status != STREL_ERR_NONCONVERGENT) {
    strel_report_free(report);
    fail(kExitData, strel_last_error());
  }
  ReportData data;
  data.converged = strel_report_converged(report) != 0;
  data.at_zero = strel_report_converged_at_zero(report) != 0;
  data.converged_k = strel_report_converged_k(report);
  data.rows.resize(strel_report_row_count(report));
  for (std::size_t i = 0; i < data.rows.size(); ++i) check(strel_report_row(report, i, &data.rows[i]));
  data.pair_means.resize(strel_report_pair_count(report));
  for (std::size_t i = 0; i < data.pair_means.size(); ++i)
    check(strel_report_pair_mean(report, i, &data.pair_means[i]));
  strel_report_free(report);
  return data;
}

int run_bench(const BenchArgs& args) {
  GraphHandle g;
  check(strel_graph_load(args.graph.c_str(), 0, &g.g));
  WorkloadHandle w;
  check(strel_workload_load(g.g, args.workload.c_str(), &w.w));
  if (strel_workload_size(w.w) == 0) fail(kExitData, "workload is empty");

  std::vector<std::string> estimators = split_estimators(args.estimators);

  strel_estimator_opts opts;
  strel_estimator_opts_init(&opts);
  opts.threshold = args.threshold;
  opts.stratum_r = args.r;
  opts.index_width = args.width;
  opts.inner = args.inner.c_str();

  strel_bench_params params;
  strel_bench_params_init(&params);
  params.start_k = args.start_k;
  params.step = args.step;
  params.rho_threshold = args.rho;
  params.t_repeats = args.t_repeats;
  params.max_steps = args.max_steps;
  params.jobs = args.jobs;

  std::filesystem::create_directories(args.out);

  // MC always runs: it is the accuracy baseline.
  std::map<std::string, ReportData> reports;
  reports["mc"] = run_one(g.g, w.w, "mc", opts, params, args.seed);
  for (const std::string& name : estimators) {
    if (name == "mc") continue;
    reports[name] = run_one(g.g, w.w, name, opts, params, args.seed);
  }

  bool all_converged = true;

  // convergence.csv, in requested order.
  std::ofstream conv(args.out + "/convergence.csv", std::ios::binary);
  conv << "estimator,K,R_K,V_K,rho,seconds,ms_per_sample\n";
  for (const std::string& name : estimators) {
    const ReportData& data = reports.at(name);
    for (const strel_convergence_row& row : data.rows) {
      conv << name << ',' << row.k << ',' << fmt(row.r_k) << ',' << fmt(row.v_k) << ','
           << fmt(row.rho) << ',' << fmt(args.no_timing ? 0.0 : row.seconds) << ','
           << fmt(args.no_timing ? 0.0 : row.ms_per_sample) << '\n';
    }
  }
  conv.close();

  // accuracy.csv: relative error at each estimator's converged K, against the
  // MC per-pair means at MC's convergence.
  const ReportData& baseline = reports.at("mc");
  std::ofstream acc(args.out + "/accuracy.csv", std::ios::binary);
  acc << "estimator,K,RE\n";
  std::vector<double> re_values;
  for (const std::string& name : estimators) {
    const ReportData& data = reports.at(name);
    if (!data.converged || !baseline.converged) {
      all_converged = all_converged && data.converged;
      continue;
    }
    double re = 0.0;
    strel_status status = strel_relative_error(data.pair_means.data(), baseline.pair_means.data(),
                                               baseline.pair_means.size(), &re);
    if (status != STREL_OK) {
      std::fprintf(stderr, "accuracy: %s\n", strel_last_error());
      continue;
    }
    acc << name << ',' << data.converged_k << ',' << fmt(re) << '\n';
    re_values.push_back(re);
  }
  acc.close();

  // index.csv for the index-backed methods in the run.
  std::ofstream idx(args.out + "/index.csv", std::ios::binary);
  idx << "method,build_s,load_s,size_bytes,refresh_s_per_query\n";
  for (const std::string& name : estimators) {
    if (name == "bfs-sharing") {
      std::string path = args.out + "/bfs_sharing.idx";
      auto t0 = std::chrono::steady_clock::now();
      strel_bfs_index* index = nullptr;
      check(strel_bfs_index_build(g.g, args.width, args.seed, &index));
      double build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      check(strel_bfs_index_save(index, path.c_str()));
      strel_bfs_index_free(index);
      t0 = std::chrono::steady_clock::now();
      strel_bfs_index* loaded = nullptr;
      check(strel_bfs_index_load(path.c_str(), &loaded));
      double load_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      t0 = std::chrono::steady_clock::now();
      const int refreshes = 10;
      for (int i = 0; i < refreshes; ++i)
        check(strel_bfs_index_refresh(loaded, g.g, args.seed + 1 + i));
      double refresh_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / refreshes;
      strel_bfs_index_free(loaded);
      idx << "bfs-sharing," << fmt(args.no_timing ? 0.0 : build_s) << ','
          << fmt(args.no_timing ? 0.0 : load_s) << ',' << std::filesystem::file_size(path) << ','
          << fmt(args.no_timing ? 0.0 : refresh_s) << '\n';
    } else if (name == "probtree") {
      std::string path = args.out + "/probtree.idx";
      auto t0 = std::chrono::steady_clock::now();
      strel_probtree* index = nullptr;
      check(strel_probtree_build(g.g, 2, 0, &index));
      double build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      check(strel_probtree_save(index, path.c_str()));
      strel_probtree_free(index);
      t0 = std::chrono::steady_clock::now();
      strel_probtree* loaded = nullptr;
      check(strel_probtree_load(path.c_str(), &loaded));
      double load_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      strel_probtree_free(loaded);
      idx << "probtree," << fmt(args.no_timing ? 0.0 : build_s) << ','
          << fmt(args.no_timing ? 0.0 : load_s) << ',' << std::filesystem::file_size(path)
          << ",0\n";  // the tree index needs no inter-query refresh
    }
  }
  idx.close();

  for (const std::string& name : estimators) {
    const ReportData& data = reports.at(name);
    all_converged = all_converged && data.converged;
    std::printf("estimator=%s converged=%d converged_K=%" PRIu64 " R_K=%s rho=%s%s\n",
                name.c_str(), data.converged ? 1 : 0, data.converged_k,
                data.rows.empty() ? "nan" : fmt(data.rows.back().r_k).c_str(),
                data.rows.empty() ? "nan" : fmt(data.rows.back().rho).c_str(),
                data.at_zero ? " converged_at_zero=1" : "");
  }
  if (re_values.size() >= 2) {
    double deviation = 0.0;
    check(strel_pairwise_deviation(re_values.data(), re_values.size(), &deviation));
    std::printf("pairwise_deviation=%s\n", fmt(deviation).c_str());
  }
  std::printf("wrote %s/convergence.csv %s/accuracy.csv %s/index.csv\n", args.out.c_str(),
              args.out.c_str(), args.out.c_str());

  if (!all_converged) fail(kExitNonConvergent, "at least one estimator did not converge");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"s-t reliability estimation over uncertain graphs"};
  app.require_subcommand(1);
  std::uint64_t seed = default_seed();

  AssignArgs assign;
  auto* cmd_assign = app.add_subcommand("assign-probs", "apply an edge probability model");
  cmd_assign->add_option("--graph", assign.graph, "input edge list (weights allowed)")->required();
  cmd_assign->add_option("--model", assign.model,
                         "inv-outdeg | uniform:v1,v2,... | exp:<mu> | fixed:<p>")->required();
  cmd_assign->add_option("--out", assign.out, "output graph file")->required();
  cmd_assign->add_option("--seed", seed, "random seed");

  WorkloadArgs workload;
  auto* cmd_workload = app.add_subcommand("gen-workload", "sample s-t query pairs");
  cmd_workload->add_option("--graph", workload.graph)->required();
  cmd_workload->add_option("--out", workload.out)->required();
  cmd_workload->add_option("--pairs", workload.pairs, "number of pairs (default 100)");
  cmd_workload->add_option("--hops", workload.hops, "exact BFS distance of t from s (default 2)");
  cmd_workload->add_option("--seed", seed, "random seed");

  BuildIndexArgs build;
  auto* cmd_build = app.add_subcommand("build-index", "build and save an offline index");
  cmd_build->add_option("--graph", build.graph)->required();
  cmd_build->add_option("--method", build.method, "bfs-sharing | probtree")->required();
  cmd_build->add_option("--out", build.out)->required();
  cmd_build->add_option("--width", build.width, "bit width L (default 1500) or tree width (default 2)");
  cmd_build->add_flag("--lossy", build.lossy, "accept tree width > 2");
  cmd_build->add_option("--seed", seed, "random seed");

  ExactArgs exact;
  auto* cmd_exact = app.add_subcommand("exact", "exact reliability by enumeration (<= 25 edges)");
  cmd_exact->add_option("--graph", exact.graph)->required();
  cmd_exact->add_option("--s", exact.s, "source node label")->required();
  cmd_exact->add_option("--t", exact.t, "target node label")->required();

  QueryArgs query;
  auto* cmd_query = app.add_subcommand("query", "estimate reliability for one s-t pair");
  cmd_query->add_option("--graph", query.graph)->required();
  cmd_query->add_option("--estimator", query.estimator,
                        "mc | bfs-sharing | rhh | rss | lp+ | lp-legacy | probtree");
  cmd_query->add_option("--inner", query.inner, "inner estimator for probtree");
  cmd_query->add_option("--index", query.index, "index file (bfs-sharing, probtree)");
  cmd_query->add_option("--s", query.s, "source node label")->required();
  cmd_query->add_option("--t", query.t, "target node label")->required();
  cmd_query->add_option("--k", query.k, "sample count (default 1000)");
  cmd_query->add_option("--threshold", query.threshold, "recursive fallback threshold (default 5)");
  cmd_query->add_option("--r", query.r, "stratum edge count (default 50)");
  cmd_query->add_option("--width", query.width, "bit width when building on the fly (default 1500)");
  cmd_query->add_flag("--lossy", query.lossy, "accept tree width > 2");
  cmd_query->add_option("--seed", seed, "random seed");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "convergence benchmark over a workload");
  cmd_bench->add_option("--graph", bench.graph)->required();
  cmd_bench->add_option("--workload", bench.workload)->required();
  cmd_bench->add_option("--out", bench.out, "output directory (default .)");
  cmd_bench->add_option("--estimators", bench.estimators, "'all' or comma-separated list");
  cmd_bench->add_option("--inner", bench.inner, "inner estimator for probtree");
  cmd_bench->add_option("--start-k", bench.start_k, "initial K (default 250)");
  cmd_bench->add_option("--step", bench.step, "K step (default 250)");
  cmd_bench->add_option("--rho", bench.rho, "dispersion threshold (default 0.001)");
  cmd_bench->add_option("--t-repeats", bench.t_repeats, "repeats per pair per K (default 100)");
  cmd_bench->add_option("--max-steps", bench.max_steps, "K cap in steps (default 20)");
  cmd_bench->add_option("--threshold", bench.threshold, "recursive fallback threshold");
  cmd_bench->add_option("--r", bench.r, "stratum edge count");
  cmd_bench->add_option("--width", bench.width, "bit-vector width L (default 1500)");
  cmd_bench->add_option("--jobs", bench.jobs, "parallel workers over pairs (default 1)");
  cmd_bench->add_flag("--no-timing", bench.no_timing, "zero the wall-clock CSV columns");
  cmd_bench->add_option("--seed", bench.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return kExitUsage;
  }

  assign.seed = seed;
  workload.seed = seed;
  build.seed = seed;
  query.seed = seed;
  if (!cmd_bench->count("--seed")) bench.seed = seed;

  try {
    if (cmd_assign->parsed()) return run_assign(assign);
    if (cmd_workload->parsed()) return run_gen_workload(workload);
    if (cmd_build->parsed()) return run_build_index(build);
    if (cmd_exact->parsed()) return run_exact(exact);
    if (cmd_query->parsed()) return run_query(query);
    if (cmd_bench->parsed()) return run_bench(bench);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
