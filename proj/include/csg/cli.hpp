#pragma once

// Command-line front end: gen, solve, bench, stats, count.
// Exit codes: 0 success, 1 usage error, 2 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csg/bench.hpp"
#include "csg/core.hpp"
#include "csg/exact.hpp"
#include "csg/grasp.hpp"
#include "csg/instances.hpp"
#include "csg/pathrelink.hpp"

namespace csg {

namespace cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kIo = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchFlags {
  double wp = kDefaultWp;
  int rii_steps = kDefaultRiiSteps;
  std::uint64_t max_iter = 0;
  std::uint64_t cutoff_ops = kDefaultCutoffOps;
  std::size_t elite = 10;
  std::string relink = "f";
  std::string neigh = "sm";
  std::uint64_t seed = 1;

  void attach(CLI::App& app) {
    app.add_option("--wp", wp, "RII parameter: a step is a random walk when u >= wp, u ~ U(0,1)")->check(CLI::Range(0.0, 1.0));
    app.add_option("--rii-steps", rii_steps, "RII stops after this many steps without improvement")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--max-iter", max_iter, "GRASP iteration cap (0 = until cutoff or target)");
    app.add_option("--cutoff-ops", cutoff_ops, "operation budget per run")->check(CLI::PositiveNumber);
    app.add_option("--elite", elite, "elite pool size for grasp-pr")->check(CLI::PositiveNumber);
    app.add_option("--relink", relink, "relinking direction: f(orward), b(ackward), fb")
        ->check(CLI::IsMember({"f", "b", "fb"}));
    app.add_option("--neigh", neigh, "neighborhood: sm (split/merge) or s (shift)")
        ->check(CLI::IsMember({"sm", "s"}));
    app.add_option("--seed", seed, "random seed");
  }

  GraspParams grasp() const {
    GraspParams p;
    p.wp = wp;
    p.rii_steps = rii_steps;
    if (max_iter > 0) p.max_iterations = max_iter;
    p.cutoff_ops = cutoff_ops;
    p.neighborhood = neigh == "s" ? NeighborhoodKind::shift : NeighborhoodKind::split_merge;
    return p;
  }

  RelinkStrategy strategy() const {
    if (relink == "b") return RelinkStrategy::backward;
    if (relink == "fb") return RelinkStrategy::forward_backward;
    return RelinkStrategy::forward;
  }
};

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return read_instance(in);
  } catch (const InstanceFormatError& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

inline void print_structure(std::ostream& out, const CoalitionStructure& cs, double value) {
  out << "structure " << cs.to_string() << '\n';
  out << "blocks " << cs.to_block_string() << '\n';
  out << "value " << format_double(value) << '\n';
}

inline void print_ops(std::ostream& out, const OperationCounter& ops) {
  out << "ops construction " << ops.construction << " local " << ops.local_search << " relink " << ops.relink
      << " total " << ops.total() << '\n';
}

inline std::vector<Distribution> parse_dists(const std::string& list) {
  std::vector<Distribution> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = std::min(list.find(',', pos), list.size());
    const auto tag = list.substr(pos, comma - pos);
    const auto d = parse_distribution(tag);
    if (!d || *d == Distribution::custom) throw CLI::ValidationError("--dists", "unknown distribution '" + tag + "'");
    out.push_back(*d);
    pos = comma + 1;
  }
  return out;
}

}  // namespace cli

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coalition structure generation: GRASP, path-relinking and exact baselines", "csg"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "help for every command");

  // gen
  int gen_agents = 0;
  std::string gen_dist;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random instance file");
  gen->add_option("--agents", gen_agents, "number of agents")->required()->check(CLI::Range(1, kMaxAgents));
  gen->add_option("--dist", gen_dist, "value distribution")->required()->check(CLI::IsMember({"U", "US", "N", "NS", "ND"}));
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output file")->required();

  // solve
  std::string solve_algo = "grasp";
  std::string solve_in;
  std::uint64_t solve_budget = 0;
  cli::SearchFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("--algo", solve_algo, "solver")
      ->check(CLI::IsMember({"grasp", "grasp-pr", "rii", "dp", "idp", "sandholm", "brute"}));
  solve->add_option("--in", solve_in, "instance file")->required();
  solve->add_option("--nodes", solve_budget, "node budget for sandholm (0 = unlimited)");
  solve_flags.attach(*solve);

  // bench
  std::string bench_algo = "grasp";
  std::string bench_dists = "U,US,N,NS,ND";
  int bench_instances = 100;
  int bench_runs = 10;
  int bench_agents = 15;
  std::string bench_prefix = "bench";
  unsigned bench_jobs = 1;
  cli::SearchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "run the benchmark protocol and write CSV files");
  bench->add_option("--algo", bench_algo, "solver")->check(CLI::IsMember({"grasp", "grasp-pr", "rii"}));
  bench->add_option("--dists", bench_dists, "comma-separated distributions");
  bench->add_option("--instances", bench_instances, "instances per distribution")->check(CLI::PositiveNumber);
  bench->add_option("--runs", bench_runs, "runs per instance")->check(CLI::PositiveNumber);
  bench->add_option("--agents", bench_agents, "number of agents")->check(CLI::Range(1, kMaxAgents));
  bench->add_option("--out-prefix", bench_prefix, "prefix of the CSV files written");
  bench->add_option("--jobs", bench_jobs, "worker threads")->check(CLI::PositiveNumber);
  bench_flags.attach(*bench);

  // stats
  std::string stats_in;
  std::uint64_t stats_cutoff = kDefaultCutoffOps;
  auto* stats = app.add_subcommand("stats", "summarize a records CSV");
  stats->add_option("--in", stats_in, "records CSV")->required();
  stats->add_option("--cutoff-ops", stats_cutoff, "run-length charged to unsuccessful runs")
      ->check(CLI::PositiveNumber);

  // count
  int count_agents = 0;
  auto* count = app.add_subcommand("count", "print structure and split counts");
  count->add_option("--agents", count_agents, "number of agents")->required()->check(CLI::Range(1, 200));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return cli::kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return cli::kUsage;
  }

  try {
    if (*gen) {
      const auto inst = generate_instance(gen_agents, *parse_distribution(gen_dist), gen_seed);
      auto file = cli::open_out(gen_out);
      write_instance(inst, file);
      out << "wrote " << gen_out << " (n=" << gen_agents << ", dist=" << gen_dist << ", seed=" << gen_seed << ")\n";
    } else if (*solve) {
      const auto inst = cli::load_instance(solve_in);
      out << "algo " << solve_algo << '\n';
      if (solve_algo == "grasp" || solve_algo == "grasp-pr" || solve_algo == "rii") {
        const auto gp = solve_flags.grasp();
        const SolveResult r = solve_algo == "grasp"  ? grasp_solve(inst, gp, solve_flags.seed)
                              : solve_algo == "rii" ? rii_solve(inst, gp, solve_flags.seed)
                                                    : grasp_pr_solve(inst, {gp, solve_flags.elite, solve_flags.strategy()},
                                                                     solve_flags.seed);
        cli::print_structure(out, r.best, r.best_value);
        cli::print_ops(out, r.ops);
        out << "iterations " << r.iterations << '\n';
      } else if (solve_algo == "sandholm") {
        const auto r = sandholm_anytime(inst, solve_budget ? std::optional(solve_budget) : std::nullopt);
        cli::print_structure(out, r.best, r.best_value);
        out << "nodes " << r.nodes_searched << '\n';
        out << "bound " << format_double(r.bound) << '\n';
        out << "optimal " << (r.phase == AnytimePhase::complete ? "yes" : "unknown") << '\n';
      } else {
        const auto r = solve_algo == "dp" ? dp_optimal(inst) : solve_algo == "idp" ? idp_optimal(inst)
                                                                                   : brute_force_optimal(inst);
        cli::print_structure(out, r.best, r.best_value);
        out << (solve_algo == "brute" ? "structures " : "splits ") << r.work << '\n';
        out << "optimal yes\n";
      }
    } else if (*bench) {
      ExperimentConfig cfg;
      cfg.algorithm = bench_algo == "grasp-pr" ? Algorithm::grasp_pr
                      : bench_algo == "rii"    ? Algorithm::rii
                                               : Algorithm::grasp;
      cfg.grasp = bench_flags.grasp();
      cfg.max_elite = bench_flags.elite;
      cfg.strategy = bench_flags.strategy();
      cfg.runs = bench_runs;
      cfg.master_seed = bench_flags.seed;
      cfg.jobs = bench_jobs;
      for (const auto dist : cli::parse_dists(bench_dists)) {
        const auto instances = make_instances(bench_agents, dist, bench_instances, cfg.master_seed, bench_jobs);
        const auto records = run_experiment(cfg, instances);
        const auto s = describe(records, cfg.grasp.cutoff_ops);
        const auto stem = bench_prefix + "_" + std::string(to_string(dist));
        {
          auto f = cli::open_out(stem + "_records.csv");
          write_records_csv(records, f);
        }
        {
          auto f = cli::open_out(stem + "_stats.csv");
          write_stats_csv(s, f, to_string(dist));
        }
        {
          auto f = cli::open_out(stem + "_rld.csv");
          write_rld_csv(empirical_rld(records, cfg.grasp.cutoff_ops), f);
        }
        out << to_string(dist) << ": " << s.opt_count << '/' << s.runs << " optimal, mean ops "
            << format_double(s.mean) << ", files " << stem << "_{records,stats,rld}.csv\n";
      }
    } else if (*stats) {
      std::ifstream in(stats_in);
      if (!in) throw cli::IoError("cannot open '" + stats_in + "'");
      std::vector<RunRecord> records;
      try {
        records = read_records_csv(in);
      } catch (const std::runtime_error& e) {
        throw cli::IoError(stats_in + ": " + e.what());
      }
      if (records.empty()) throw cli::IoError(stats_in + ": no records");
      const auto s = describe(records, stats_cutoff);
      out << "runs      " << s.runs << '\n';
      out << "mean      " << format_double(s.mean) << '\n';
      out << "min       " << format_double(s.min) << '\n';
      out << "max       " << format_double(s.max) << '\n';
      out << "stddev    " << format_double(s.stddev) << '\n';
      out << "vc        " << format_double(s.vc) << '\n';
      out << "q75/q25   " << format_double(s.quantile_ratio) << '\n';
      out << "#opt      " << s.opt_count << '\n';
    } else if (*count) {
      const auto row = stirling2_row(count_agents);
      out << "stirling";
      for (int i = 1; i <= count_agents; ++i) out << ' ' << row[i];
      out << '\n';
      out << "bell " << count_structures(count_agents) << '\n';
      const auto splits = splitting_counts(count_agents);
      out << "s_dp " << splits.dp << '\n';
      out << "s_idp " << splits.idp << '\n';
    }
  } catch (const cli::IoError& e) {
    err << "error: " << e.what() << '\n';
    return cli::kIo;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return cli::kIo;
  }
  return cli::kOk;
}

}  // namespace csg
