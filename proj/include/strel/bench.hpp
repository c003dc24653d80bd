#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "strel/estimate.hpp"
#include "strel/graph.hpp"

namespace strel {

struct WorkloadPair {
  NodeId s = 0;
  NodeId t = 0;
  std::uint32_t hops = 0;
};

struct Workload {
  std::vector<WorkloadPair> pairs;
  std::uint64_t seed = 0;
};

// n_pairs distinct sources chosen uniformly; for each, one target drawn
// uniformly among the nodes at exactly `hops` BFS distance. hops must be >= 1.
// Throws workload_exhausted_error when the graph cannot supply enough sources.
Workload generate_workload(const UncertainGraph& g, std::size_t n_pairs, std::uint32_t hops,
                           RandomStream& rng);

// Text format: one "s t" line per pair, original labels.
std::string serialize_workload(const UncertainGraph& g, const Workload& w);
Workload parse_workload(const UncertainGraph& g, std::string_view text);
void save_workload(const UncertainGraph& g, const Workload& w, const std::string& path);
Workload load_workload(const UncertainGraph& g, const std::string& path);

struct VarianceResult {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, (T-1) denominator
};

// T repeated runs of the estimator at fixed K; repeat j uses rng.split(j).
VarianceResult estimate_variance(const EstimatorFn& estimator, const UncertainGraph& g,
                                 const WorkloadPair& pair, std::uint64_t k, std::uint64_t t_repeats,
                                 RandomStream& rng);

struct ConvergenceRow {
  std::uint64_t k = 0;
  double r_k = 0.0;        // mean estimate, averaged over pairs
  double v_k = 0.0;        // variance over repeats, averaged over pairs
  double rho = 0.0;        // v_k / r_k (0 when r_k == 0)
  double seconds = 0.0;    // total estimator wall time at this K
  double ms_per_sample = 0.0;
};

struct ConvergenceReport {
  std::string estimator;
  std::vector<ConvergenceRow> rows;
  bool converged = false;
  bool converged_at_zero = false;  // all-zero workload declared converged
  std::uint64_t converged_k = 0;
  std::vector<double> pair_means;  // per-pair mean estimate at converged_k
};

struct ConvergenceParams {
  std::uint64_t start_k = 250;
  std::uint64_t step = 250;
  double rho_threshold = 1e-3;
  std::uint64_t t_repeats = 100;
  std::uint64_t max_steps = 20;
  unsigned jobs = 1;  // workload pairs evaluated in parallel
};

// Raises K from start_k in steps until rho = V_K / R_K drops below the
// threshold. A workload whose estimates are identically zero for two
// consecutive steps is declared converged at zero. When the step cap is hit
// the report comes back with converged = false; interpreting that as an error
// is left to the caller.
ConvergenceReport run_convergence(const EstimatorFn& estimator, const std::string& name,
                                  const UncertainGraph& g, const Workload& workload,
                                  const ConvergenceParams& params, RandomStream& rng);

// Mean over pairs of |est - base| / base. Throws zero_baseline_error naming
// the offending pairs if any baseline value is zero.
double relative_error(std::span<const double> estimates, std::span<const double> baseline);

// Mean absolute pairwise gap between relative errors:
// (1/(k(k-1))) * sum_i sum_j |re[i] - re[j]|.
double pairwise_deviation(std::span<const double> re_values);

// CSV emission. Schemas are fixed:
//   convergence.csv: estimator,K,R_K,V_K,rho,seconds,ms_per_sample
//   accuracy.csv:    estimator,K,RE
//   index.csv:       method,build_s,load_s,size_bytes,refresh_s_per_query
// with_timing=false zeroes the wall-clock columns for byte-reproducible runs.
void write_convergence_csv(std::ostream& os, std::span<const ConvergenceReport> reports,
                           bool with_timing);

struct AccuracyRow {
  std::string estimator;
  std::uint64_t k = 0;
  double re = 0.0;
};
void write_accuracy_csv(std::ostream& os, std::span<const AccuracyRow> rows);

struct IndexCostRow {
  std::string method;
  double build_s = 0.0;
  double load_s = 0.0;
  std::uint64_t size_bytes = 0;
  double refresh_s_per_query = 0.0;
};
void write_index_csv(std::ostream& os, std::span<const IndexCostRow> rows, bool with_timing);

// Fixed-format float used in all CSV output (shortest round-trip form).
std::string format_double(double v);

}  // namespace strel
