#pragma once

// Greedy randomized adaptive search for coalition structure generation.
//
// One iteration builds a structure agent by agent from a restricted candidate
// list (RCL), then improves it with randomised iterative improvement (RII)
// over the split/merge or shift neighborhood. The RCL parameter alpha is
// redrawn from U(0,1) at the start of every iteration.
//
// RII step rule: draw u ~ U(0,1); u >= wp takes a uniformly random neighbor
// (random walk), otherwise an improvement step. An improvement step picks a
// uniformly random strictly improving neighbor, or the best neighbor when
// none improves. So wp is the probability of an improvement step, and the
// default wp = 0.7 walks on 30% of the steps.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "csg/core.hpp"
#include "csg/counter.hpp"
#include "csg/neighborhoods.hpp"
#include "csg/rng.hpp"

namespace csg {

inline constexpr double kDefaultWp = 0.7;
inline constexpr std::uint64_t kDefaultCutoffOps = 10'000'000;
inline constexpr int kDefaultRiiSteps = 20;

struct GraspParams {
  std::optional<std::uint64_t> max_iterations;  // unbounded when empty
  NeighborhoodKind neighborhood = NeighborhoodKind::split_merge;
  int rii_steps = kDefaultRiiSteps;
  double wp = kDefaultWp;  // see the step rule above
  std::uint64_t cutoff_ops = kDefaultCutoffOps;
  std::optional<double> target_value;  // stop once the incumbent reaches it

  void validate() const {
    if (!(wp >= 0.0 && wp <= 1.0)) {
      throw std::invalid_argument("wp must lie in [0, 1]");
    }
    if (rii_steps < 0) throw std::invalid_argument("rii steps must be non-negative");
    if (cutoff_ops < 1) throw std::invalid_argument("cutoff must be at least one operation");
    if (max_iterations && *max_iterations < 1) {
      throw std::invalid_argument("max iterations must be at least 1");
    }
  }
};

struct SolveResult {
  CoalitionStructure best;
  double best_value = 0.0;
  OperationCounter ops;
  std::uint64_t iterations = 0;
  bool reached_target = false;
};

/// Shared stopping state of one run: the operation counter, the cutoff and
/// the optional quality target.
class SearchControl {
 public:
  SearchControl(OperationCounter& ops, std::uint64_t cutoff, std::optional<double> target)
      : ops_(&ops), cutoff_(cutoff), target_(target) {}

  OperationCounter& ops() { return *ops_; }
  void count(Phase phase, std::uint64_t n) { ops_->add(phase, n); }
  bool out_of_budget() const { return ops_->total() >= cutoff_; }

  bool hits_target(double value) const {
    return target_ && value >= *target_ * (1.0 - kValueTolerance);
  }

 private:
  OperationCounter* ops_;
  std::uint64_t cutoff_;
  std::optional<double> target_;
};

namespace detail {

struct Placement {
  double value;
  Mask agent;
  int block;  // index into the partial block list, or -1 for a new singleton
};

/// Builds a complete structure in n placements. When `ctl` is given the build
/// is abandoned (returns nullopt) if the budget runs out between placements.
inline std::optional<std::vector<Mask>> construct(const Instance& inst, double alpha, Rng& rng,
                                                  OperationCounter& ops, const SearchControl* ctl) {
  const int n = inst.agents();
  std::vector<Mask> blocks;
  blocks.reserve(n);
  std::vector<Placement> candidates;
  candidates.reserve(static_cast<std::size_t>(n) * (n + 1));
  Mask unassigned = full_mask(n);
  double current = 0.0;

  for (int step = 0; step < n; ++step) {
    if (ctl && ctl->out_of_budget()) return std::nullopt;
    candidates.clear();
    // Agents in ascending id order (highest bit first), blocks in creation order.
    for (Mask left = unassigned; left;) {
      const Mask a = std::bit_floor(left);
      left ^= a;
      for (int j = 0; j < static_cast<int>(blocks.size()); ++j) {
        candidates.push_back({current - inst.value(blocks[j]) + inst.value(blocks[j] | a), a, j});
      }
      candidates.push_back({current + inst.value(a), a, -1});
    }
    ops.add(Phase::construction, candidates.size());

    double lo = candidates.front().value;
    double hi = lo;
    for (const auto& c : candidates) {
      lo = std::min(lo, c.value);
      hi = std::max(hi, c.value);
    }
    const double threshold = std::min(hi, lo + alpha * (hi - lo));
    const auto in_rcl = [threshold](const Placement& c) { return c.value >= threshold; };
    const auto rcl_size = static_cast<std::uint64_t>(std::count_if(candidates.begin(), candidates.end(), in_rcl));
    std::uint64_t pick = rng.below(rcl_size);
    const Placement* chosen = nullptr;
    for (const auto& c : candidates) {
      if (in_rcl(c) && pick-- == 0) {
        chosen = &c;
        break;
      }
    }

    if (chosen->block < 0) {
      blocks.push_back(chosen->agent);
    } else {
      blocks[chosen->block] |= chosen->agent;
    }
    unassigned ^= chosen->agent;
    current = blocks_value(blocks, inst);
  }
  return blocks;
}

/// RII in the maximizing orientation. Returns the best partition seen.
inline BlockPartition rii_search(const BlockPartition& start, double wp, int steps,
                                 NeighborhoodKind kind, Rng& rng, SearchControl& ctl,
                                 std::vector<ScoredMove>& buffer) {
  BlockPartition current = start;
  BlockPartition best = start;
  int idle = 0;
  while (idle < steps && !ctl.out_of_budget()) {
    ++idle;
    current.collect(kind, buffer);
    ctl.count(Phase::local_search, buffer.size());
    if (buffer.empty()) break;

    const ScoredMove* pick = nullptr;
    if (rng.uniform() >= wp) {
      pick = &buffer[rng.below(buffer.size())];
    } else {
      const double now = current.value();
      const auto improving = static_cast<std::uint64_t>(std::count_if(
          buffer.begin(), buffer.end(), [now](const ScoredMove& m) { return m.value > now; }));
      if (improving > 0) {
        std::uint64_t r = rng.below(improving);
        for (const auto& m : buffer) {
          if (m.value > now && r-- == 0) {
            pick = &m;
            break;
          }
        }
      } else {
        // Minimally worsening: the largest value in the neighborhood.
        pick = &*std::max_element(buffer.begin(), buffer.end(),
                                  [](const ScoredMove& a, const ScoredMove& b) { return a.value < b.value; });
      }
    }

    current.apply(pick->move);
    if (current.value() > best.value()) {
      best = current;
      idle = 0;
    }
  }
  return best;
}

}  // namespace detail

/// One construction with a fixed alpha; every evaluated candidate is one
/// construction operation.
inline CoalitionStructure greedy_randomized_construction(const Instance& inst, double alpha, Rng& rng,
                                                         OperationCounter& ops) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  const auto blocks = detail::construct(inst, alpha, rng, ops, nullptr);
  return CoalitionStructure::from_blocks(*blocks, inst.agents());
}

/// Randomised iterative improvement from `start`; stops after `steps`
/// consecutive steps without a new best and returns the best seen.
inline CoalitionStructure rii(const Instance& inst, const CoalitionStructure& start, double wp, int steps,
                              NeighborhoodKind kind, Rng& rng, OperationCounter& ops) {
  if (!(wp >= 0.0 && wp <= 1.0)) throw std::invalid_argument("wp must lie in [0, 1]");
  SearchControl ctl(ops, std::numeric_limits<std::uint64_t>::max(), std::nullopt);
  std::vector<ScoredMove> buffer;
  return detail::rii_search(BlockPartition(start, inst), wp, steps, kind, rng, ctl, buffer).structure();
}

inline SolveResult grasp_solve(const Instance& inst, const GraspParams& p, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  SolveResult result{CoalitionStructure::grand(inst.agents()), 0.0, {}, 0, false};
  SearchControl ctl(result.ops, p.cutoff_ops, p.target_value);
  std::optional<BlockPartition> incumbent;
  std::vector<ScoredMove> buffer;

  while (!p.max_iterations || result.iterations < *p.max_iterations) {
    if (incumbent && ctl.out_of_budget()) break;
    const double alpha = rng.uniform();
    auto built = detail::construct(inst, alpha, rng, result.ops, incumbent ? &ctl : nullptr);
    if (!built) break;
    auto local = detail::rii_search(BlockPartition(std::move(*built), inst), p.wp,
                                    p.rii_steps, p.neighborhood, rng, ctl, buffer);
    ++result.iterations;
    if (!incumbent || local.value() > incumbent->value()) incumbent = std::move(local);
    if (ctl.hits_target(incumbent->value())) {
      result.reached_target = true;
      break;
    }
  }

  result.best = incumbent->structure();
  result.best_value = cs_value(result.best, inst);
  return result;
}

/// A single RII run from a uniformly random structure (alpha = 0).
inline SolveResult rii_solve(const Instance& inst, const GraspParams& p, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  SolveResult result{CoalitionStructure::grand(inst.agents()), 0.0, {}, 0, false};
  SearchControl ctl(result.ops, p.cutoff_ops, p.target_value);
  std::vector<ScoredMove> buffer;
  auto built = detail::construct(inst, 0.0, rng, result.ops, nullptr);
  const auto best = detail::rii_search(BlockPartition(std::move(*built), inst), p.wp,
                                       p.rii_steps, p.neighborhood, rng, ctl, buffer);
  result.iterations = 1;
  result.best = best.structure();
  result.best_value = cs_value(result.best, inst);
  result.reached_target = ctl.hits_target(result.best_value);
  return result;
}

}  // namespace csg
