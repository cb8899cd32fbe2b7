#pragma once

// Path-relinking between coalition structures, the elite pool, and GRASP+PR.
//
// The move set between a structure x and a guiding structure t comes from a
// block alignment: every target block is paired with at most one block of x,
// greedily by largest overlap (ties: smaller first member of the target
// block, then of the current block). An agent is in place when it already
// sits in the block paired with its target block; every other agent needs
// exactly one reassignment, either into that paired block or, when the
// target block has no partner yet, into a fresh block that later members of
// the same target block then join. At least one agent is always in place, so
// a path never takes more than n - 1 steps, and it ends exactly at t.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "csg/core.hpp"
#include "csg/counter.hpp"
#include "csg/grasp.hpp"
#include "csg/neighborhoods.hpp"
#include "csg/rng.hpp"

namespace csg {

enum class RelinkStrategy { forward, backward, forward_backward };

namespace detail {

/// partner[j] = index into `current` paired with target block j, or -1.
/// Zero masks in `current` are ignored.
inline std::vector<int> align_blocks(std::span<const Mask> current, std::span<const Mask> target) {
  struct Overlap {
    int size;
    int t;
    int c;
  };
  std::vector<Overlap> pairs;
  for (int t = 0; t < static_cast<int>(target.size()); ++t) {
    for (int c = 0; c < static_cast<int>(current.size()); ++c) {
      const int size = std::popcount(current[c] & target[t]);
      if (size > 0) pairs.push_back({size, t, c});
    }
  }
  // Higher bit = smaller agent id; target blocks arrive in canonical order.
  std::sort(pairs.begin(), pairs.end(), [&](const Overlap& a, const Overlap& b) {
    if (a.size != b.size) return a.size > b.size;
    if (a.t != b.t) return a.t < b.t;
    return std::bit_floor(current[a.c]) > std::bit_floor(current[b.c]);
  });
  std::vector<int> partner(target.size(), -1);
  std::vector<bool> taken(current.size(), false);
  for (const auto& p : pairs) {
    if (partner[p.t] < 0 && !taken[p.c]) {
      partner[p.t] = p.c;
      taken[p.c] = true;
    }
  }
  return partner;
}

struct Pending {
  Mask agent;
  int target_block;
};

inline std::vector<Pending> misplaced_agents(std::span<const Mask> current, std::span<const Mask> target,
                                             std::span<const int> partner, int n) {
  std::vector<Pending> out;
  for (int a = 1; a <= n; ++a) {
    const Mask bit = agent_bit(a, n);
    int j = 0;
    while (!(target[j] & bit)) ++j;
    if (partner[j] < 0 || !(current[partner[j]] & bit)) out.push_back({bit, j});
  }
  return out;
}

struct RelinkOutcome {
  CoalitionStructure best;
  double best_value;
  int steps;
  std::vector<Mask> end;  // where the walk stopped; empty masks included
};

inline RelinkOutcome relink(const Instance& inst, const CoalitionStructure& from, const CoalitionStructure& to,
                            SearchControl& ctl) {
  const int n = inst.agents();
  if (from.agents() != n || to.agents() != n) throw std::invalid_argument("dimension mismatch");

  std::vector<Mask> blocks = from.blocks();  // emptied blocks stay as 0 so indices are stable
  const std::vector<Mask> target = to.blocks();
  std::vector<int> partner = align_blocks(blocks, target);
  std::vector<Pending> pending = misplaced_agents(blocks, target, partner, n);

  double value = blocks_value(blocks, inst);
  const double target_value = cs_value(to, inst);
  RelinkOutcome out{from, value, 0, {}};
  if (target_value > value) {
    out.best = to;
    out.best_value = target_value;
  }

  auto block_of = [&blocks](Mask a) {
    return static_cast<int>(std::find_if(blocks.begin(), blocks.end(), [a](Mask b) { return b & a; }) -
                            blocks.begin());
  };

  while (!pending.empty() && !ctl.out_of_budget()) {
    std::size_t chosen = 0;
    double chosen_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto [a, j] = pending[i];
      const Mask src = blocks[block_of(a)];
      const int home = partner[j];
      double probe = value - inst.value(src) + inst.value(src ^ a);
      probe += home >= 0 ? inst.value(blocks[home] | a) - inst.value(blocks[home]) : inst.value(a);
      if (probe > chosen_value) {
        chosen_value = probe;
        chosen = i;
      }
    }
    ctl.count(Phase::relink, pending.size());

    const auto [a, j] = pending[chosen];
    blocks[block_of(a)] ^= a;
    if (partner[j] >= 0) {
      blocks[partner[j]] |= a;
    } else {
      partner[j] = static_cast<int>(blocks.size());
      blocks.push_back(a);
    }
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(chosen));
    ++out.steps;
    value = blocks_value(blocks, inst);

    if (value > out.best_value) {
      std::vector<Mask> live;
      std::copy_if(blocks.begin(), blocks.end(), std::back_inserter(live), [](Mask b) { return b != 0; });
      out.best = CoalitionStructure::from_blocks(live, n);
      out.best_value = value;
    }
  }
  out.end = std::move(blocks);
  return out;
}

}  // namespace detail

/// Reassignment moves (SHIFT moves, FRESH where the target block has no
/// partner) that turn `x` into `target`; empty iff x == target.
inline std::vector<Move> delta(const CoalitionStructure& x, const CoalitionStructure& target) {
  if (x.agents() != target.agents()) throw std::invalid_argument("dimension mismatch");
  const int n = x.agents();
  const auto current = x.blocks();
  const auto goal = target.blocks();
  const auto partner = detail::align_blocks(current, goal);
  std::vector<Move> moves;
  for (const auto& p : detail::misplaced_agents(current, goal, partner, n)) {
    const int home = partner[p.target_block];
    moves.push_back(Move::shift(first_agent(p.agent, n), home >= 0 ? home + 1 : kFresh));
  }
  return moves;
}

struct RelinkResult {
  CoalitionStructure best;
  double best_value;
  int steps;  // moves applied
  CoalitionStructure end;
};

/// Greedy walk from `from` to `to`: each step applies the remaining move with
/// the largest resulting value. Returns the best structure on the path,
/// endpoints included. Each probe is one relink operation.
inline RelinkResult path_relink(const Instance& inst, const CoalitionStructure& from,
                                const CoalitionStructure& to, OperationCounter& ops) {
  SearchControl ctl(ops, std::numeric_limits<std::uint64_t>::max(), std::nullopt);
  auto r = detail::relink(inst, from, to, ctl);
  std::erase(r.end, Mask{0});
  return {std::move(r.best), r.best_value, r.steps, CoalitionStructure::from_blocks(r.end, inst.agents())};
}

/// Bounded set of distinct good structures.
class ElitePool {
 public:
  struct Entry {
    CoalitionStructure structure;
    double value;
  };

  explicit ElitePool(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("elite pool capacity must be at least 1");
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }

  bool contains(const CoalitionStructure& cs) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.structure == cs; });
  }

  /// Rejects duplicates. When full, replaces the worst entry only if `value`
  /// is strictly larger. Returns whether the pool changed.
  bool insert(const CoalitionStructure& cs, double value) {
    if (contains(cs)) return false;
    if (entries_.size() < capacity_) {
      entries_.push_back({cs, value});
      return true;
    }
    auto worst = std::min_element(entries_.begin(), entries_.end(),
                                  [](const Entry& a, const Entry& b) { return a.value < b.value; });
    if (value <= worst->value) return false;
    *worst = {cs, value};
    return true;
  }

  /// Entries by descending value (insertion order among ties).
  std::vector<Entry> by_value() const {
    std::vector<Entry> out = entries_;
    std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.value > b.value; });
    return out;
  }

 private:
  std::size_t capacity_;
  std::vector<Entry> entries_;
};

struct PathRelinkParams {
  GraspParams grasp;
  std::size_t max_elite = 10;
  RelinkStrategy strategy = RelinkStrategy::forward;
};

inline SolveResult grasp_pr_solve(const Instance& inst, const PathRelinkParams& p, std::uint64_t seed) {
  p.grasp.validate();
  Rng rng(seed);
  SolveResult result{CoalitionStructure::grand(inst.agents()), 0.0, {}, 0, false};
  SearchControl ctl(result.ops, p.grasp.cutoff_ops, p.grasp.target_value);
  ElitePool pool(p.max_elite);
  std::vector<ScoredMove> buffer;
  std::optional<CoalitionStructure> incumbent;
  double incumbent_value = -std::numeric_limits<double>::infinity();

  auto offer = [&](const CoalitionStructure& cs, double value) {
    if (!incumbent || value > incumbent_value) {
      incumbent = cs;
      incumbent_value = value;
    }
    return ctl.hits_target(incumbent_value);
  };

  bool done = false;
  while (!done && (!p.grasp.max_iterations || result.iterations < *p.grasp.max_iterations)) {
    if (incumbent && ctl.out_of_budget()) break;
    const double alpha = rng.uniform();
    auto built = detail::construct(inst, alpha, rng, result.ops, incumbent ? &ctl : nullptr);
    if (!built) break;
    const auto local = detail::rii_search(BlockPartition(std::move(*built), inst), p.grasp.wp,
                                          p.grasp.rii_steps, p.grasp.neighborhood, rng, ctl, buffer);
    const CoalitionStructure current = local.structure();
    const double current_value = local.value();
    ++result.iterations;
    done = offer(current, current_value);

    if (result.iterations > 1) {
      for (const auto& elite : pool.by_value()) {
        if (done || ctl.out_of_budget()) break;
        // Lower-valued endpoint first for a forward walk; ties start from the new local optimum.
        const bool current_lower = current_value <= elite.value;
        const auto& low = current_lower ? current : elite.structure;
        const auto& high = current_lower ? elite.structure : current;
        std::optional<detail::RelinkOutcome> product;
        if (p.strategy != RelinkStrategy::backward) product = detail::relink(inst, low, high, ctl);
        if (p.strategy != RelinkStrategy::forward) {
          auto back = detail::relink(inst, high, low, ctl);
          if (!product || back.best_value > product->best_value) product = std::move(back);
        }
        pool.insert(product->best, product->best_value);
        done = offer(product->best, product->best_value);
      }
    }
    pool.insert(current, current_value);
  }

  result.reached_target = done;
  result.best = *incumbent;
  result.best_value = cs_value(result.best, inst);
  return result;
}

}  // namespace csg
