#pragma once

// Benchmark harness: seeded experiments over generated instances, run-length
// distributions, summary statistics and the CSV files that carry them.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "csg/core.hpp"
#include "csg/counter.hpp"
#include "csg/exact.hpp"
#include "csg/grasp.hpp"
#include "csg/instances.hpp"
#include "csg/pathrelink.hpp"
#include "csg/rng.hpp"

namespace csg {

enum class Algorithm { grasp, grasp_pr, rii };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::grasp:
      return "grasp";
    case Algorithm::grasp_pr:
      return "grasp-pr";
    case Algorithm::rii:
      return "rii";
  }
  return "?";
}

struct RunRecord {
  std::uint64_t run_id = 0;
  std::uint64_t instance = 0;
  std::uint64_t seed = 0;
  OperationCounter ops;
  std::uint64_t iterations = 0;
  double best_value = 0.0;
  double quality = 1.0;  // optimum / best_value, at least 1
  bool success = false;
  double wall_seconds = 0.0;  // informational only; never exported
};

/// An instance together with its exact optimum.
struct BenchInstance {
  Instance instance;
  double optimum;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::grasp;
  GraspParams grasp;
  std::size_t max_elite = 10;
  RelinkStrategy strategy = RelinkStrategy::forward;
  int runs = 10;  // per instance
  std::uint64_t master_seed = 1;
  unsigned jobs = 1;
};

inline std::uint64_t instance_seed(std::uint64_t master, Distribution dist, std::uint64_t index) {
  return derive_seed(derive_seed(master, 0x1000 + static_cast<std::uint64_t>(dist)), index);
}

/// `count` instances of one distribution, each solved exactly with DP.
inline std::vector<BenchInstance> make_instances(int agents, Distribution dist, int count, std::uint64_t master,
                                                 unsigned jobs = 1) {
  if (count < 1) throw std::invalid_argument("instance count must be at least 1");
  std::vector<std::optional<BenchInstance>> slots(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      auto inst = generate_instance(agents, dist, instance_seed(master, dist, i));
      const double opt = dp_optimal(inst).best_value;
      slots[i].emplace(BenchInstance{std::move(inst), opt});
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<BenchInstance> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline double solution_quality(double optimum, double value) {
  if (value <= 0.0) return optimum <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return std::max(1.0, optimum / value);
}

/// One run against `bi`, stopping once the optimum is reached.
inline RunRecord run_once(const ExperimentConfig& cfg, const BenchInstance& bi, std::uint64_t run_id,
                          std::uint64_t instance_index, std::uint64_t seed) {
  GraspParams gp = cfg.grasp;
  gp.target_value = bi.optimum;
  const auto start = std::chrono::steady_clock::now();
  const SolveResult r = [&] {
    switch (cfg.algorithm) {
      case Algorithm::grasp_pr:
        return grasp_pr_solve(bi.instance, PathRelinkParams{gp, cfg.max_elite, cfg.strategy}, seed);
      case Algorithm::rii:
        return rii_solve(bi.instance, gp, seed);
      case Algorithm::grasp:
        break;
    }
    return grasp_solve(bi.instance, gp, seed);
  }();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  RunRecord rec;
  rec.run_id = run_id;
  rec.instance = instance_index;
  rec.seed = seed;
  rec.ops = r.ops;
  rec.iterations = r.iterations;
  rec.best_value = r.best_value;
  rec.quality = solution_quality(bi.optimum, r.best_value);
  rec.success = r.reached_target && r.ops.total() <= gp.cutoff_ops;
  rec.wall_seconds = elapsed.count();
  return rec;
}

/// runs * instances.size() records ordered by run_id = instance * runs + r.
/// Each run's seed is derived from the master seed and its run_id alone, so
/// the output does not depend on `jobs`.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, std::span<const BenchInstance> instances) {
  cfg.grasp.validate();
  if (cfg.runs < 1) throw std::invalid_argument("runs per instance must be at least 1");
  if (cfg.max_elite < 1) throw std::invalid_argument("elite pool capacity must be at least 1");
  const std::uint64_t total = instances.size() * static_cast<std::uint64_t>(cfg.runs);
  std::vector<RunRecord> records(total);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t id = next++; id < total; id = next++) {
      const std::uint64_t inst = id / cfg.runs;
      records[id] = run_once(cfg, instances[inst], id, inst, derive_seed(cfg.master_seed, id));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, cfg.jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

struct RldPoint {
  std::uint64_t ops;
  double probability;
};

struct Rld {
  std::vector<RldPoint> points;  // one point per distinct successful run-length
  double terminal = 0.0;         // k' / k
};

/// Empirical run-length distribution P(T <= t) over successful runs with
/// run-length at most `cutoff`.
inline Rld empirical_rld(std::span<const RunRecord> records, std::uint64_t cutoff) {
  if (records.empty()) throw std::invalid_argument("empirical_rld needs at least one record");
  std::vector<std::uint64_t> lengths;
  for (const auto& r : records) {
    if (r.success && r.ops.total() <= cutoff) lengths.push_back(r.ops.total());
  }
  std::sort(lengths.begin(), lengths.end());
  const double k = static_cast<double>(records.size());
  Rld rld;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (i + 1 < lengths.size() && lengths[i + 1] == lengths[i]) continue;
    rld.points.push_back({lengths[i], static_cast<double>(i + 1) / k});
  }
  rld.terminal = static_cast<double>(lengths.size()) / k;
  return rld;
}

struct Stats {
  std::size_t runs = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // population
  double vc = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double quantile_ratio = 1.0;  // q75 / q25
  std::size_t opt_count = 0;
};

inline double variation_coefficient(double mean, double stddev) { return mean == 0.0 ? 0.0 : stddev / mean; }

/// Nearest-rank quantile: the ceil(p * N)-th smallest value (1-based).
inline double nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

inline Stats describe_values(std::span<const double> xs, std::size_t opt_count = 0) {
  if (xs.empty()) throw std::invalid_argument("describe needs at least one value");
  Stats s;
  s.runs = xs.size();
  s.opt_count = opt_count;
  double sum = 0.0;
  s.min = s.max = xs.front();
  for (double x : xs) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
  s.mean = std::clamp(s.mean, s.min, s.max);
  s.vc = variation_coefficient(s.mean, s.stddev);
  const std::vector<double> v(xs.begin(), xs.end());
  s.q25 = nearest_rank(v, 0.25);
  s.q75 = nearest_rank(v, 0.75);
  s.quantile_ratio = s.q25 == 0.0 ? (s.q75 == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                  : s.q75 / s.q25;
  return s;
}

/// Statistics of total run-lengths. With a cutoff, unsuccessful runs count as
/// exactly `cutoff` operations (censored).
inline Stats describe(std::span<const RunRecord> records, std::optional<std::uint64_t> cutoff = std::nullopt) {
  if (records.empty()) throw std::invalid_argument("describe needs at least one record");
  std::vector<double> xs;
  xs.reserve(records.size());
  std::size_t opt = 0;
  for (const auto& r : records) {
    opt += r.success ? 1 : 0;
    const auto t = (!r.success && cutoff) ? *cutoff : r.ops.total();
    xs.push_back(static_cast<double>(t));
  }
  return describe_values(xs, opt);
}

inline constexpr std::string_view kRecordsHeader =
    "run_id,seed,ops_total,ops_construction,ops_local,ops_relink,iters,best_value,quality,success";

inline void write_records_csv(std::span<const RunRecord> records, std::ostream& out) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << r.run_id << ',' << r.seed << ',' << r.ops.total() << ',' << r.ops.construction << ','
        << r.ops.local_search << ',' << r.ops.relink << ',' << r.iterations << ',' << format_double(r.best_value)
        << ',' << format_double(r.quality) << ',' << (r.success ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing records");
}

/// Inverse of write_records_csv. The instance index is not stored and is left 0.
inline std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kRecordsHeader) {
    throw std::runtime_error("records file: missing or unexpected header");
  }
  std::vector<RunRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t pos = 0;
    while (true) {
      const auto comma = text.find(',', pos);
      f.push_back(text.substr(pos, comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    RunRecord r;
    std::uint64_t total = 0;
    int success = 0;
    const bool ok = f.size() == 10 && detail::parse_number(f[0], r.run_id) && detail::parse_number(f[1], r.seed) &&
                    detail::parse_number(f[2], total) && detail::parse_number(f[3], r.ops.construction) &&
                    detail::parse_number(f[4], r.ops.local_search) && detail::parse_number(f[5], r.ops.relink) &&
                    detail::parse_number(f[6], r.iterations) && detail::parse_number(f[7], r.best_value) &&
                    detail::parse_number(f[8], r.quality) && detail::parse_number(f[9], success) &&
                    (success == 0 || success == 1);
    if (!ok) throw std::runtime_error("records file line " + std::to_string(line_no) + ": malformed row");
    if (total != r.ops.total()) {
      throw std::runtime_error("records file line " + std::to_string(line_no) + ": phase counts do not sum to total");
    }
    r.success = success == 1;
    out.push_back(r);
  }
  return out;
}

inline void write_stats_csv(const Stats& s, std::ostream& out, std::string_view label = "all") {
  out << "label,runs,mean,min,max,stddev,vc,q25,q75,q75_q25,opt_count\n";
  out << label << ',' << s.runs << ',' << format_double(s.mean) << ',' << format_double(s.min) << ','
      << format_double(s.max) << ',' << format_double(s.stddev) << ',' << format_double(s.vc) << ','
      << format_double(s.q25) << ',' << format_double(s.q75) << ',' << format_double(s.quantile_ratio) << ','
      << s.opt_count << '\n';
  if (!out) throw std::runtime_error("failed writing stats");
}

inline void write_rld_csv(const Rld& rld, std::ostream& out) {
  out << "ops,cumulative_probability\n";
  for (const auto& p : rld.points) out << p.ops << ',' << format_double(p.probability) << '\n';
  if (!out) throw std::runtime_error("failed writing run-length distribution");
}

}  // namespace csg
