#pragma once

// SPLIT / MERGE / SHIFT moves over coalition structures.
//
// Two layers live here. Move, enumerate_moves, apply_move and neighbors work
// on canonical CoalitionStructure values and name blocks by their RGS label.
// BlockPartition is the working representation used inside the solvers: a
// list of block masks whose neighborhood can be scanned with O(1) value
// updates per neighbor, without building a structure for every candidate.
// Both layers describe the same neighborhoods; the tests hold them together.

#include <bit>
#include <cstdint>
#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "csg/core.hpp"

namespace csg {

enum class MoveKind : std::uint8_t { split, merge, shift };

/// N_{s/m} (splits and merges) or N_s (shifts).
enum class NeighborhoodKind { split_merge, shift };

/// Shift target meaning "a new singleton block".
inline constexpr int kFresh = 0;

struct Move {
  MoveKind kind = MoveKind::split;
  int block = 0;  // split: source label; merge: lower label
  int other = 0;  // merge: higher label; shift: target label or kFresh
  int agent = 0;  // shift: the agent that moves
  Mask part = 0;  // split: the piece that keeps the source label

  static Move split(int block, Mask part) { return {MoveKind::split, block, 0, 0, part}; }
  static Move merge(int a, int b) { return {MoveKind::merge, std::min(a, b), std::max(a, b), 0, 0}; }
  static Move shift(int agent, int target) { return {MoveKind::shift, 0, target, agent, 0}; }

  friend bool operator==(const Move&, const Move&) = default;
};

/// Every non-identity move of one kind, without duplicates among moves.
/// SPLIT of a block of size s gives 2^(s-1) - 1 moves (the kept piece always
/// holds the block's first agent), MERGE gives C(k, 2), SHIFT gives one move
/// per (agent, other block) plus a FRESH move when the agent is not alone.
inline std::vector<Move> enumerate_moves(const CoalitionStructure& cs, MoveKind kind) {
  std::vector<Move> moves;
  const auto blocks = cs.blocks();
  const int k = cs.block_count();
  switch (kind) {
    case MoveKind::split:
      for (int b = 1; b <= k; ++b) {
        const Mask whole = blocks[b - 1];
        const Mask top = std::bit_floor(whole);
        const Mask rest = whole ^ top;
        if (rest == 0) continue;
        for (Mask sub = 0; sub != rest; sub = (sub - rest) & rest) {
          moves.push_back(Move::split(b, top | sub));
        }
      }
      break;
    case MoveKind::merge:
      for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) moves.push_back(Move::merge(i, j));
      }
      break;
    case MoveKind::shift:
      for (int a = 1; a <= cs.agents(); ++a) {
        const int own = cs.label_of(a);
        for (int t = 1; t <= k; ++t) {
          if (t != own) moves.push_back(Move::shift(a, t));
        }
        if (std::popcount(blocks[own - 1]) >= 2) moves.push_back(Move::shift(a, kFresh));
      }
      break;
  }
  return moves;
}

/// Applies `m` and returns the canonical result. Throws std::invalid_argument
/// if the move does not describe a non-identity change of `cs`.
inline CoalitionStructure apply_move(const CoalitionStructure& cs, const Move& m) {
  const int n = cs.agents();
  const int k = cs.block_count();
  auto in_range = [k](int label) { return label >= 1 && label <= k; };
  std::vector<int> raw(cs.labels().begin(), cs.labels().end());

  switch (m.kind) {
    case MoveKind::split: {
      if (!in_range(m.block)) throw std::invalid_argument("split: no such block");
      const Mask whole = cs.block(m.block);
      if (m.part == 0 || (m.part & ~whole) || m.part == whole) {
        throw std::invalid_argument("split: part must be a proper non-empty subset of the block");
      }
      for (int a = 1; a <= n; ++a) {
        if ((whole & agent_bit(a, n)) && !(m.part & agent_bit(a, n))) raw[a - 1] = k + 1;
      }
      break;
    }
    case MoveKind::merge:
      if (!in_range(m.block) || !in_range(m.other) || m.block == m.other) {
        throw std::invalid_argument("merge: need two distinct existing blocks");
      }
      for (auto& d : raw) {
        if (d == m.other) d = m.block;
      }
      break;
    case MoveKind::shift: {
      if (m.agent < 1 || m.agent > n) throw std::invalid_argument("shift: no such agent");
      const int own = raw[m.agent - 1];
      if (m.other == kFresh) {
        if (std::popcount(cs.block(own)) < 2) {
          throw std::invalid_argument("shift: moving a singleton to a fresh block is the identity");
        }
        raw[m.agent - 1] = k + 1;
      } else {
        if (!in_range(m.other)) throw std::invalid_argument("shift: no such target block");
        if (m.other == own) throw std::invalid_argument("shift: target is the agent's own block");
        raw[m.agent - 1] = m.other;
      }
      break;
    }
  }
  return CoalitionStructure::from_labels(raw);
}

/// A move expressed against BlockPartition's block indices.
struct LocalMove {
  static constexpr std::uint8_t kNewBlock = 0xff;

  MoveKind kind = MoveKind::split;
  std::uint8_t from = 0;  // split: block; merge: first block; shift: source block
  std::uint8_t to = 0;    // merge: second block; shift: target block or kNewBlock
  Mask bits = 0;          // split: the kept piece; shift: the agent's bit
};

struct ScoredMove {
  LocalMove move;
  double value;  // value of the structure after the move
};

/// Mutable partition as a list of block masks, bound to one instance (which
/// must outlive it). Block order is an implementation detail; structure()
/// canonicalizes.
class BlockPartition {
 public:
  BlockPartition(std::vector<Mask> blocks, const Instance& inst)
      : inst_(&inst), blocks_(std::move(blocks)), value_(blocks_value(blocks_, inst)) {}

  BlockPartition(const CoalitionStructure& cs, const Instance& inst)
      : BlockPartition(cs.blocks(), inst) {
    if (cs.agents() != inst.agents()) throw std::invalid_argument("dimension mismatch");
  }

  double value() const { return value_; }
  std::span<const Mask> blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  CoalitionStructure structure() const {
    return CoalitionStructure::from_blocks(blocks_, inst_->agents());
  }

  /// Calls fn(LocalMove, value_after) once per distinct neighboring structure.
  template <typename Fn>
  void scan(NeighborhoodKind kind, Fn&& fn) const {
    scan_blocks(blocks_, value_, *inst_, kind, fn);
  }

  void collect(NeighborhoodKind kind, std::vector<ScoredMove>& out) const {
    out.clear();
    scan(kind, [&out](const LocalMove& m, double value) { out.push_back({m, value}); });
  }

  void apply(const LocalMove& m) {
    apply_to(blocks_, m);
    value_ = blocks_value(blocks_, *inst_);
  }

  /// Neighborhood scan over raw blocks; `values` needs value(Mask) -> double.
  /// Shift duplicates (two singletons joining each other, either agent of a
  /// pair leaving to a fresh block) are reported once, for the lower agent id.
  template <typename Values, typename Fn>
  static void scan_blocks(std::span<const Mask> blocks, double current, const Values& v,
                          NeighborhoodKind kind, Fn&& fn) {
    const auto k = static_cast<std::uint8_t>(blocks.size());
    if (kind == NeighborhoodKind::split_merge) {
      for (std::uint8_t i = 0; i < k; ++i) {
        const Mask whole = blocks[i];
        const Mask top = std::bit_floor(whole);
        const Mask rest = whole ^ top;
        if (rest == 0) continue;
        const double base = current - v.value(whole);
        for (Mask sub = 0; sub != rest; sub = (sub - rest) & rest) {
          const Mask kept = top | sub;
          fn(LocalMove{MoveKind::split, i, 0, kept}, base + v.value(kept) + v.value(whole ^ kept));
        }
      }
      for (std::uint8_t i = 0; i < k; ++i) {
        const double base = current - v.value(blocks[i]);
        for (std::uint8_t j = i + 1; j < k; ++j) {
          fn(LocalMove{MoveKind::merge, i, j, 0},
             base - v.value(blocks[j]) + v.value(blocks[i] | blocks[j]));
        }
      }
      return;
    }
    for (std::uint8_t i = 0; i < k; ++i) {
      const Mask src = blocks[i];
      const int src_size = std::popcount(src);
      const double base = current - v.value(src);
      for (Mask left = src; left; left &= left - 1) {
        const Mask a = left & (~left + 1);
        const double after_src = base + v.value(src ^ a);
        for (std::uint8_t j = 0; j < k; ++j) {
          if (j == i) continue;
          const Mask dst = blocks[j];
          // {a} -> {b} and {b} -> {a} give the same structure.
          if (src_size == 1 && std::popcount(dst) == 1 && a < dst) continue;
          fn(LocalMove{MoveKind::shift, i, j, a}, after_src - v.value(dst) + v.value(dst | a));
        }
        if (src_size >= 2 && !(src_size == 2 && a != std::bit_floor(src))) {
          fn(LocalMove{MoveKind::shift, i, LocalMove::kNewBlock, a}, after_src + v.value(a));
        }
      }
    }
  }

  static void apply_to(std::vector<Mask>& blocks, const LocalMove& m) {
    switch (m.kind) {
      case MoveKind::split: {
        const Mask whole = blocks[m.from];
        blocks[m.from] = m.bits;
        blocks.push_back(whole ^ m.bits);
        break;
      }
      case MoveKind::merge:
        blocks[m.from] |= blocks[m.to];
        blocks.erase(blocks.begin() + m.to);
        break;
      case MoveKind::shift:
        blocks[m.from] ^= m.bits;
        if (m.to == LocalMove::kNewBlock) {
          blocks.push_back(m.bits);
        } else {
          blocks[m.to] |= m.bits;
        }
        if (blocks[m.from] == 0) blocks.erase(blocks.begin() + m.from);
        break;
    }
  }

 private:
  const Instance* inst_;
  std::vector<Mask> blocks_;
  double value_;
};

/// Distinct structures reachable by one move of the given neighborhood.
inline std::vector<CoalitionStructure> neighbors(const CoalitionStructure& cs, NeighborhoodKind kind) {
  struct NoValues {
    double value(Mask) const { return 0.0; }
  };
  const int n = cs.agents();
  const auto start = cs.blocks();
  std::vector<CoalitionStructure> out;
  BlockPartition::scan_blocks(start, 0.0, NoValues{}, kind, [&](const LocalMove& m, double) {
    auto next = start;
    BlockPartition::apply_to(next, m);
    out.push_back(CoalitionStructure::from_blocks(next, n));
  });
  return out;
}

}  // namespace csg
