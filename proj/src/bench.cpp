#include "strel/bench.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "strel/errors.hpp"

namespace strel {

Workload generate_workload(const UncertainGraph& g, std::size_t n_pairs, std::uint32_t hops,
                           RandomStream& rng) {
  if (n_pairs < 1) throw bad_argument("workload needs at least one pair");
  if (hops < 1) throw bad_argument("hop distance must be >= 1; s = t pairs are degenerate");

  Workload w;
  w.seed = rng.seed();

  // Random permutation of candidate sources; each source is tried once.
  std::vector<NodeId> perm(g.num_nodes());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.uniform_int(i)]);

  std::vector<std::uint32_t> dist(g.num_nodes());
  std::vector<NodeId> queue, candidates;
  for (NodeId s : perm) {
    if (w.pairs.size() == n_pairs) break;
    // BFS up to `hops` levels on the skeleton.
    std::fill(dist.begin(), dist.end(), static_cast<std::uint32_t>(-1));
    queue.clear();
    candidates.clear();
    dist[s] = 0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeId v = queue[head];
      if (dist[v] == hops) break;  // queue is in distance order
      for (EdgeId e : g.out_edges(v)) {
        NodeId x = g.edge(e).target;
        if (dist[x] != static_cast<std::uint32_t>(-1)) continue;
        dist[x] = dist[v] + 1;
        queue.push_back(x);
        if (dist[x] == hops) candidates.push_back(x);
      }
    }
    if (candidates.empty()) continue;
    NodeId t = candidates[rng.uniform_int(candidates.size())];
    w.pairs.push_back(WorkloadPair{s, t, hops});
  }
  if (w.pairs.size() < n_pairs)
    throw workload_exhausted_error("found only " + std::to_string(w.pairs.size()) +
                                   " sources with a node at distance " + std::to_string(hops) +
                                   ", need " + std::to_string(n_pairs));
  return w;
}

std::string serialize_workload(const UncertainGraph& g, const Workload& w) {
  std::string out;
  char buf[64];
  for (const WorkloadPair& pair : w.pairs) {
    int len = std::snprintf(buf, sizeof(buf), "%" PRIu64 " %" PRIu64 "\n", g.label_of(pair.s),
                            g.label_of(pair.t));
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

Workload parse_workload(const UncertainGraph& g, std::string_view text) {
  Workload w;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    std::uint64_t labels[2];
    int n_tok = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      std::string_view tok = line.substr(i, j - i);
      std::uint64_t value;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || n_tok == 2)
        throw parse_error(line_no, "expected 's t'");
      labels[n_tok++] = value;
      i = j;
    }
    if (n_tok == 0) continue;
    if (n_tok != 2) throw parse_error(line_no, "expected 's t'");

    auto s = g.id_of_label(labels[0]);
    auto t = g.id_of_label(labels[1]);
    if (!s || !t) throw parse_error(line_no, "unknown node label");

    // Recover the hop distance for reporting.
    std::vector<std::uint32_t> dist(g.num_nodes(), static_cast<std::uint32_t>(-1));
    std::vector<NodeId> queue{*s};
    dist[*s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (EdgeId e : g.out_edges(queue[head])) {
        NodeId x = g.edge(e).target;
        if (dist[x] != static_cast<std::uint32_t>(-1)) continue;
        dist[x] = dist[queue[head]] + 1;
        queue.push_back(x);
      }
    }
    std::uint32_t hops = dist[*t] == static_cast<std::uint32_t>(-1) ? 0 : dist[*t];
    w.pairs.push_back(WorkloadPair{*s, *t, hops});
  }
  return w;
}

void save_workload(const UncertainGraph& g, const Workload& w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << serialize_workload(g, w);
  if (!out) throw io_error("write failed: " + path);
}

Workload load_workload(const UncertainGraph& g, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_workload(g, ss.str());
}

namespace {

struct TimedVariance {
  double mean = 0.0;
  double variance = 0.0;
  double seconds = 0.0;
  bool all_zero = true;
};

TimedVariance timed_variance(const EstimatorFn& estimator, const UncertainGraph& g,
                             const WorkloadPair& pair, std::uint64_t k, std::uint64_t t_repeats,
                             const RandomStream& base) {
  TimedVariance out;
  std::vector<double> values(t_repeats);
  for (std::uint64_t j = 0; j < t_repeats; ++j) {
    RandomStream run = base.split(j);
    Estimate est = estimator(g, pair.s, pair.t, k, run);
    values[j] = est.value;
    out.seconds += est.seconds;
    if (est.value != 0.0) out.all_zero = false;
  }
  double sum = std::accumulate(values.begin(), values.end(), 0.0);
  out.mean = sum / static_cast<double>(t_repeats);
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.variance = ss / static_cast<double>(t_repeats - 1);
  return out;
}

}  // namespace

VarianceResult estimate_variance(const EstimatorFn& estimator, const UncertainGraph& g,
                                 const WorkloadPair& pair, std::uint64_t k,
                                 std::uint64_t t_repeats, RandomStream& rng) {
  if (t_repeats < 2) throw bad_argument("variance needs T >= 2 repeats");
  TimedVariance tv = timed_variance(estimator, g, pair, k, t_repeats, rng.split(0));
  return VarianceResult{tv.mean, tv.variance};
}

ConvergenceReport run_convergence(const EstimatorFn& estimator, const std::string& name,
                                  const UncertainGraph& g, const Workload& workload,
                                  const ConvergenceParams& params, RandomStream& rng) {
  if (workload.pairs.empty()) throw bad_argument("empty workload");
  if (params.t_repeats < 2) throw bad_argument("variance needs T >= 2 repeats");

  ConvergenceReport report;
  report.estimator = name;

  const std::size_t n_pairs = workload.pairs.size();
  unsigned jobs = params.jobs < 1 ? 1 : params.jobs;
  // A shared bit-vector index cannot be refreshed while other queries run;
  // this implementation rebuilds per call, but the contract stays serial.
  if (name == "bfs-sharing") jobs = 1;

  std::uint32_t zero_streak = 0;
  for (std::uint64_t step = 0; step < params.max_steps; ++step) {
    const std::uint64_t k = params.start_k + step * params.step;
    RandomStream step_stream = rng.split(step);

    std::vector<TimedVariance> per_pair(n_pairs);
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        per_pair[i] = timed_variance(estimator, g, workload.pairs[i], k, params.t_repeats,
                                     step_stream.split(i));
    };
    if (jobs <= 1 || n_pairs <= 1) {
      work(0, n_pairs);
    } else {
      std::vector<std::thread> threads;
      std::size_t chunk = (n_pairs + jobs - 1) / jobs;
      for (std::size_t begin = 0; begin < n_pairs; begin += chunk)
        threads.emplace_back(work, begin, std::min(begin + chunk, n_pairs));
      for (auto& th : threads) th.join();
    }

    ConvergenceRow row;
    row.k = k;
    bool all_zero = true;
    for (const TimedVariance& tv : per_pair) {
      row.r_k += tv.mean;
      row.v_k += tv.variance;
      row.seconds += tv.seconds;
      all_zero = all_zero && tv.all_zero;
    }
    row.r_k /= static_cast<double>(n_pairs);
    row.v_k /= static_cast<double>(n_pairs);
    row.rho = row.r_k > 0.0 ? row.v_k / row.r_k : 0.0;
    row.ms_per_sample = row.seconds * 1000.0 /
                        static_cast<double>(k * params.t_repeats * n_pairs);
    report.rows.push_back(row);

    auto record_converged = [&](bool at_zero) {
      report.converged = true;
      report.converged_at_zero = at_zero;
      report.converged_k = k;
      report.pair_means.resize(n_pairs);
      for (std::size_t i = 0; i < n_pairs; ++i) report.pair_means[i] = per_pair[i].mean;
    };

    if (all_zero && row.r_k == 0.0) {
      // rho is undefined at zero reliability; two consecutive all-zero steps
      // count as converged-at-zero.
      if (++zero_streak >= 2) {
        record_converged(true);
        return report;
      }
      continue;
    }
    zero_streak = 0;
    if (row.rho < params.rho_threshold) {
      record_converged(false);
      return report;
    }
  }
  return report;  // converged == false: the caller decides how hard to fail
}

double relative_error(std::span<const double> estimates, std::span<const double> baseline) {
  if (estimates.size() != baseline.size()) throw bad_argument("pair count mismatch");
  if (estimates.empty()) throw bad_argument("no pairs");
  std::string zeros;
  for (std::size_t i = 0; i < baseline.size(); ++i)
    if (baseline[i] == 0.0) zeros += (zeros.empty() ? "" : ", ") + std::to_string(i);
  if (!zeros.empty())
    throw zero_baseline_error("baseline reliability is zero for pair(s) " + zeros);
  double total = 0.0;
  for (std::size_t i = 0; i < baseline.size(); ++i)
    total += std::abs(estimates[i] - baseline[i]) / baseline[i];
  return total / static_cast<double>(baseline.size());
}

double pairwise_deviation(std::span<const double> re_values) {
  const std::size_t k = re_values.size();
  if (k < 2) throw bad_argument("pairwise deviation needs at least two values");
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) total += std::abs(re_values[i] - re_values[j]);
  return total / static_cast<double>(k * (k - 1));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_convergence_csv(std::ostream& os, std::span<const ConvergenceReport> reports,
                           bool with_timing) {
  os << "estimator,K,R_K,V_K,rho,seconds,ms_per_sample\n";
  for (const ConvergenceReport& report : reports) {
    for (const ConvergenceRow& row : report.rows) {
      os << report.estimator << ',' << row.k << ',' << format_double(row.r_k) << ','
         << format_double(row.v_k) << ',' << format_double(row.rho) << ','
         << format_double(with_timing ? row.seconds : 0.0) << ','
         << format_double(with_timing ? row.ms_per_sample : 0.0) << '\n';
    }
  }
}

void write_accuracy_csv(std::ostream& os, std::span<const AccuracyRow> rows) {
  os << "estimator,K,RE\n";
  for (const AccuracyRow& row : rows)
    os << row.estimator << ',' << row.k << ',' << format_double(row.re) << '\n';
}

void write_index_csv(std::ostream& os, std::span<const IndexCostRow> rows, bool with_timing) {
  os << "method,build_s,load_s,size_bytes,refresh_s_per_query\n";
  for (const IndexCostRow& row : rows) {
    os << row.method << ',' << format_double(with_timing ? row.build_s : 0.0) << ','
       << format_double(with_timing ? row.load_s : 0.0) << ',' << row.size_bytes << ','
       << format_double(with_timing ? row.refresh_s_per_query : 0.0) << '\n';
  }
}

}  // namespace strel
