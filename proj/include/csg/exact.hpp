#pragma once

// Exact baselines: exhaustive enumeration, the DP over all coalitions, its
// IDP pruning, the closed-form split counts of both, and the anytime search
// over the coalition structure graph.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "csg/core.hpp"

namespace csg {

inline constexpr int kMaxBruteForceAgents = 13;

struct ExactResult {
  CoalitionStructure best;
  double best_value = 0.0;
  std::uint64_t work = 0;  // structures evaluated (brute force) or splits evaluated (DP/IDP)
};

/// Enumerates every structure; ties keep the lexicographically smallest RGS.
inline ExactResult brute_force_optimal(const Instance& inst) {
  const int n = inst.agents();
  if (n > kMaxBruteForceAgents) {
    throw std::invalid_argument("brute force limited to " + std::to_string(kMaxBruteForceAgents) + " agents");
  }
  std::vector<int> best_labels;
  double best_value = -std::numeric_limits<double>::infinity();
  std::uint64_t seen = 0;
  for_each_rgs(n, [&](std::span<const int> labels, std::span<const Mask> blocks) {
    ++seen;
    const double v = blocks_value(blocks, inst);
    if (v > best_value) {
      best_value = v;
      best_labels.assign(labels.begin(), labels.end());
    }
    return true;
  });
  return {CoalitionStructure::from_labels(best_labels), best_value, seen};
}

/// t1[C]: the kept half of C's best split (0 = keep C whole); t2[C]: best
/// value achievable by partitioning C.
struct DpTables {
  std::vector<Mask> t1;
  std::vector<double> t2;
  std::uint64_t split_evaluations = 0;
};

enum class DpVariant { full, improved };

namespace detail {

/// Next mask with the same popcount (Gosper's hack).
constexpr Mask next_same_popcount(Mask x) {
  const Mask low = x & (~x + 1);
  const Mask ripple = x + low;
  return (((ripple ^ x) >> 2) / low) | ripple;
}

}  // namespace detail

/// Fills both tables in ascending coalition size. Each unordered bipartition
/// {A, C \ A} is visited once, with A holding C's first agent, in ascending A.
/// The improved variant evaluates a split of a size-s coalition (s < n) only
/// when its larger part has at most n - s agents. Ties keep the earlier split,
/// and a split must strictly beat v(C).
inline DpTables dp_tables(const Instance& inst, DpVariant variant) {
  const int n = inst.agents();
  const std::size_t size = std::size_t{1} << n;
  DpTables tables{std::vector<Mask>(size, 0), std::vector<double>(size, 0.0), 0};
  auto& t1 = tables.t1;
  auto& t2 = tables.t2;

  for (int s = 1; s <= n; ++s) {
    const int allowed = (variant == DpVariant::improved && s < n) ? n - s : s;
    const Mask last = full_mask(n) << (n - s) & full_mask(n);
    for (Mask c = full_mask(s);; c = detail::next_same_popcount(c)) {
      double best = inst.value(c);
      Mask best_part = 0;
      // Larger part of a split of s agents has at least ceil(s/2) members.
      if (s >= 2 && allowed >= (s + 1) / 2) {
        const Mask top = std::bit_floor(c);
        const Mask rest = c ^ top;
        for (Mask sub = 0; sub != rest; sub = (sub - rest) & rest) {
          const Mask a = top | sub;
          const Mask b = c ^ a;
          const int pa = std::popcount(a);
          if (std::max(pa, s - pa) > allowed) continue;
          ++tables.split_evaluations;
          const double v = t2[a] + t2[b];
          if (v > best) {
            best = v;
            best_part = a;
          }
        }
      }
      t1[c] = best_part;
      t2[c] = best;
      if (c == last) break;
    }
  }
  return tables;
}

/// Follows t1 from the grand coalition down to blocks kept whole.
inline CoalitionStructure reconstruct(const DpTables& tables, int n) {
  std::vector<Mask> blocks;
  std::vector<Mask> stack{full_mask(n)};
  while (!stack.empty()) {
    const Mask c = stack.back();
    stack.pop_back();
    const Mask part = tables.t1[c];
    if (part == 0) {
      blocks.push_back(c);
    } else {
      stack.push_back(part);
      stack.push_back(c ^ part);
    }
  }
  return CoalitionStructure::from_blocks(blocks, n);
}

namespace detail {

inline ExactResult solve_dp(const Instance& inst, DpVariant variant) {
  const auto tables = dp_tables(inst, variant);
  const int n = inst.agents();
  auto best = reconstruct(tables, n);
  return {std::move(best), tables.t2[full_mask(n)], tables.split_evaluations};
}

}  // namespace detail

inline ExactResult dp_optimal(const Instance& inst) { return detail::solve_dp(inst, DpVariant::full); }

inline ExactResult idp_optimal(const Instance& inst) { return detail::solve_dp(inst, DpVariant::improved); }

struct SplitCounts {
  BigInt dp;
  BigInt idp;
};

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Number of splittings of a (s1 + s2)-coalition into parts of sizes s1, s2.
inline BigInt split_count(int s1, int s2) {
  const BigInt c = binomial(s1 + s2, s2);
  return s1 == s2 ? BigInt(c / 2) : c;
}

/// Closed-form split totals of DP and IDP over n agents.
inline SplitCounts splitting_counts(int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  SplitCounts out{0, 0};
  for (int s = 1; s <= n; ++s) {
    const BigInt coalitions = binomial(n, s);
    BigInt all = 0;
    BigInt kept = 0;
    for (int k = (s + 1) / 2; k <= s - 1; ++k) {
      const BigInt splits = split_count(s - k, k);
      all += splits;
      if (k <= n - s || s == n) kept += splits;
    }
    out.dp += coalitions * all;
    out.idp += coalitions * kept;
  }
  return out;
}

enum class AnytimePhase {
  bottom_levels,  // still inside the first 2^(n-1) nodes; no bound yet
  top_down,       // bound n established, breadth-first from the singleton level
  complete,       // every structure seen; best is optimal
};

struct AnytimeResult {
  CoalitionStructure best;
  double best_value = 0.0;
  double bound = std::numeric_limits<double>::infinity();
  std::uint64_t nodes_searched = 0;
  AnytimePhase phase = AnytimePhase::bottom_levels;
};

/// Anytime search over the coalition structure graph. First the grand
/// coalition and every two-block structure (2^(n-1) nodes, after which the
/// best seen is within a factor n of optimal), then levels with n, n-1, ..., 3
/// blocks. Stops when `node_budget` nodes have been evaluated.
inline AnytimeResult sandholm_anytime(const Instance& inst,
                                      std::optional<std::uint64_t> node_budget = std::nullopt) {
  const int n = inst.agents();
  const std::uint64_t budget = node_budget.value_or(std::numeric_limits<std::uint64_t>::max());
  AnytimeResult r{CoalitionStructure::grand(n), inst.value(full_mask(n))};
  std::vector<Mask> best_blocks{full_mask(n)};
  if (budget == 0) return r;
  r.nodes_searched = 1;

  auto visit = [&](std::span<const Mask> blocks) {
    if (r.nodes_searched >= budget) return false;
    ++r.nodes_searched;
    const double v = blocks_value(blocks, inst);
    if (v > r.best_value) {
      r.best_value = v;
      best_blocks.assign(blocks.begin(), blocks.end());
    }
    return true;
  };
  auto finish = [&] {
    r.best = CoalitionStructure::from_blocks(best_blocks, n);
    return r;
  };

  // Level 2: the part holding agent 1 ranges over proper subsets containing it.
  const Mask top = agent_bit(1, n);
  const Mask rest = full_mask(n) ^ top;
  for (Mask sub = 0; sub != rest; sub = (sub - rest) & rest) {
    const Mask pair[2] = {top | sub, rest ^ sub};
    if (!visit(pair)) return finish();
  }
  r.phase = AnytimePhase::top_down;
  r.bound = n;

  for (int level = n; level >= 3; --level) {
    const bool whole = for_each_rgs(
        n, [&](std::span<const int>, std::span<const Mask> blocks) { return visit(blocks); }, level);
    if (!whole) return finish();
  }
  r.phase = AnytimePhase::complete;
  r.bound = 1.0;
  return finish();
}

}  // namespace csg
