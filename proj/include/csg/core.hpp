#pragma once

// Coalitions, coalition structures and characteristic-function instances.
//
// A coalition of n agents is a bit mask in [1, 2^n - 1]. Agent a_i (1-based)
// owns bit (n - i), so a_1 is the most significant bit: with n = 4 the
// coalition {a2, a3} is 0110b = 6.
//
// A coalition structure is kept as its restricted growth sequence (RGS)
// d_1..d_n: d_1 = 1 and d_{i+1} <= 1 + max(d_1..d_i). Blocks are therefore
// numbered by their smallest member and every partition has exactly one
// representation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace csg {

using Mask = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxAgents = 26;

/// Relative tolerance used whenever two coalition-structure values are compared.
inline constexpr double kValueTolerance = 1e-9;

inline bool values_equal(double a, double b, double rel = kValueTolerance) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= rel * scale;
}

constexpr Mask agent_bit(int agent, int n) { return Mask{1} << (n - agent); }

constexpr Mask full_mask(int n) {
  return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1;
}

/// Smallest agent id contained in a non-empty coalition.
inline int first_agent(Mask c, int n) { return n - std::bit_width(c) + 1; }

inline Mask encode_coalition(std::span<const int> members, int n) {
  if (n < 1 || n > kMaxAgents) {
    throw std::invalid_argument("agent count out of range");
  }
  if (members.empty()) {
    throw std::invalid_argument("a coalition must be non-empty");
  }
  Mask c = 0;
  for (int a : members) {
    if (a < 1 || a > n) {
      throw std::out_of_range("agent id " + std::to_string(a) +
                              " outside [1, " + std::to_string(n) + "]");
    }
    c |= agent_bit(a, n);
  }
  return c;
}

inline Mask encode_coalition(std::initializer_list<int> members, int n) {
  return encode_coalition(std::span<const int>(members.begin(), members.size()), n);
}

/// Members of `c` in ascending agent order.
inline std::vector<int> decode_coalition(Mask c, int n) {
  if (c == 0 || c > full_mask(n)) {
    throw std::out_of_range("coalition index outside [1, 2^n - 1]");
  }
  std::vector<int> members;
  members.reserve(std::popcount(c));
  for (int a = 1; a <= n; ++a) {
    if (c & agent_bit(a, n)) members.push_back(a);
  }
  return members;
}

class CoalitionStructure {
 public:
  /// Relabels blocks by order of first appearance. Accepts any integer labels.
  static CoalitionStructure from_labels(std::span<const int> raw) {
    if (raw.empty()) throw std::invalid_argument("empty label sequence");
    if (raw.size() > static_cast<std::size_t>(kMaxAgents)) {
      throw std::invalid_argument("too many agents");
    }
    CoalitionStructure cs;
    cs.labels_.resize(raw.size());
    std::vector<std::pair<int, int>> seen;  // raw label -> canonical label
    for (std::size_t i = 0; i < raw.size(); ++i) {
      auto it = std::find_if(seen.begin(), seen.end(),
                             [&](const auto& p) { return p.first == raw[i]; });
      int label;
      if (it == seen.end()) {
        label = static_cast<int>(seen.size()) + 1;
        seen.emplace_back(raw[i], label);
      } else {
        label = it->second;
      }
      cs.labels_[i] = static_cast<std::uint8_t>(label);
    }
    cs.blocks_ = static_cast<int>(seen.size());
    return cs;
  }

  static CoalitionStructure from_labels(std::initializer_list<int> raw) {
    return from_labels(std::span<const int>(raw.begin(), raw.size()));
  }

  /// Builds a structure from disjoint, non-empty masks covering all n agents.
  /// Block order is irrelevant.
  static CoalitionStructure from_blocks(std::span<const Mask> blocks, int n) {
    if (n < 1 || n > kMaxAgents) {
      throw std::invalid_argument("agent count out of range");
    }
    Mask seen = 0;
    std::vector<int> raw(n, 0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Mask m = blocks[b];
      if (m == 0) throw std::invalid_argument("empty block");
      if (m & ~full_mask(n)) throw std::invalid_argument("block outside agent set");
      if (m & seen) throw std::invalid_argument("blocks overlap");
      seen |= m;
      for (int a = 1; a <= n; ++a) {
        if (m & agent_bit(a, n)) raw[a - 1] = static_cast<int>(b) + 1;
      }
    }
    if (seen != full_mask(n)) throw std::invalid_argument("blocks do not cover all agents");
    return from_labels(raw);
  }

  /// Parses the RGS string produced by to_string(). Labels 1..9 are digits,
  /// 10 and above are 'a', 'b', ... The input must already be canonical.
  static CoalitionStructure parse(std::string_view rgs) {
    std::vector<int> raw;
    raw.reserve(rgs.size());
    int top = 0;
    for (char ch : rgs) {
      int d;
      if (ch >= '1' && ch <= '9') {
        d = ch - '0';
      } else if (ch >= 'a' && ch <= 'z') {
        d = ch - 'a' + 10;
      } else {
        throw std::invalid_argument(std::string("bad RGS character '") + ch + "'");
      }
      if (d > top + 1) throw std::invalid_argument("not a restricted growth sequence");
      top = std::max(top, d);
      raw.push_back(d);
    }
    return from_labels(raw);
  }

  static CoalitionStructure grand(int n) { return from_labels(std::vector<int>(n, 1)); }

  static CoalitionStructure singletons(int n) {
    std::vector<int> raw(n);
    for (int i = 0; i < n; ++i) raw[i] = i + 1;
    return from_labels(raw);
  }

  int agents() const { return static_cast<int>(labels_.size()); }
  int block_count() const { return blocks_; }
  std::span<const std::uint8_t> labels() const { return labels_; }
  int label_of(int agent) const { return labels_.at(agent - 1); }

  /// Block masks indexed by label - 1.
  std::vector<Mask> blocks() const {
    const int n = agents();
    std::vector<Mask> out(blocks_, 0);
    for (int a = 1; a <= n; ++a) out[labels_[a - 1] - 1] |= agent_bit(a, n);
    return out;
  }

  Mask block(int label) const {
    if (label < 1 || label > blocks_) throw std::out_of_range("block label out of range");
    const int n = agents();
    Mask m = 0;
    for (int a = 1; a <= n; ++a) {
      if (labels_[a - 1] == label) m |= agent_bit(a, n);
    }
    return m;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(labels_.size());
    for (int d : labels_) s.push_back(d < 10 ? static_cast<char>('0' + d)
                                             : static_cast<char>('a' + d - 10));
    return s;
  }

  /// e.g. {{1,2},{3},{4}}
  std::string to_block_string() const {
    const int n = agents();
    std::string s = "{";
    const auto bs = blocks();
    for (std::size_t b = 0; b < bs.size(); ++b) {
      if (b) s += ',';
      s += '{';
      bool first = true;
      for (int a : decode_coalition(bs[b], n)) {
        if (!first) s += ',';
        s += std::to_string(a);
        first = false;
      }
      s += '}';
    }
    s += '}';
    return s;
  }

  friend bool operator==(const CoalitionStructure&, const CoalitionStructure&) = default;
  friend auto operator<=>(const CoalitionStructure& a, const CoalitionStructure& b) {
    return a.labels_ <=> b.labels_;
  }

 private:
  CoalitionStructure() = default;

  std::vector<std::uint8_t> labels_;
  int blocks_ = 0;
};

inline CoalitionStructure canonicalize(std::span<const int> raw) {
  return CoalitionStructure::from_labels(raw);
}

inline CoalitionStructure canonicalize(std::initializer_list<int> raw) {
  return CoalitionStructure::from_labels(raw);
}

enum class Distribution { uniform, uniform_scaled, normal, normal_scaled, normally_distributed, custom };

inline std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::uniform: return "U";
    case Distribution::uniform_scaled: return "US";
    case Distribution::normal: return "N";
    case Distribution::normal_scaled: return "NS";
    case Distribution::normally_distributed: return "ND";
    case Distribution::custom: return "custom";
  }
  return "custom";
}

inline std::optional<Distribution> parse_distribution(std::string_view tag) {
  for (auto d : {Distribution::uniform, Distribution::uniform_scaled, Distribution::normal,
                 Distribution::normal_scaled, Distribution::normally_distributed,
                 Distribution::custom}) {
    if (tag == to_string(d)) return d;
  }
  return std::nullopt;
}

/// Agent count plus the dense characteristic-function table.
///
/// The table is stored with a leading zero so that value(0) = v(empty) = 0;
/// values() exposes the logical 2^n - 1 entries, values()[c - 1] = v(c).
class Instance {
 public:
  Instance(int n, std::span<const double> values, Distribution dist = Distribution::custom,
           std::optional<std::uint64_t> seed = std::nullopt)
      : n_(n), dist_(dist), seed_(seed) {
    if (n < 1 || n > kMaxAgents) {
      throw std::invalid_argument("agent count must be in [1, " + std::to_string(kMaxAgents) + "]");
    }
    const std::size_t expected = std::size_t{full_mask(n)};
    if (values.size() != expected) {
      throw std::invalid_argument("expected " + std::to_string(expected) + " values, got " +
                                  std::to_string(values.size()));
    }
    table_.reserve(expected + 1);
    table_.push_back(0.0);
    table_.insert(table_.end(), values.begin(), values.end());
  }

  int agents() const { return n_; }
  double value(Mask c) const { return table_[c]; }
  std::span<const double> values() const { return std::span(table_).subspan(1); }
  Distribution distribution() const { return dist_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  /// Amount added to every raw value by normalize_values (0 if untouched).
  double shift() const { return shift_; }

  double min_value() const { return *std::min_element(table_.begin() + 1, table_.end()); }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  friend Instance normalize_values(const Instance& inst);

  int n_;
  Distribution dist_;
  std::optional<std::uint64_t> seed_;
  double shift_ = 0.0;
  std::vector<double> table_;
};

/// Sum of v over the blocks of `cs`.
inline double cs_value(const CoalitionStructure& cs, const Instance& inst) {
  if (cs.agents() != inst.agents()) {
    throw std::invalid_argument("structure has " + std::to_string(cs.agents()) +
                                " agents, instance has " + std::to_string(inst.agents()));
  }
  double total = 0.0;
  for (Mask b : cs.blocks()) total += inst.value(b);
  return total;
}

inline double blocks_value(std::span<const Mask> blocks, const Instance& inst) {
  double total = 0.0;
  for (Mask b : blocks) total += inst.value(b);
  return total;
}

/// Shifts every value by -min when the minimum is negative.
inline Instance normalize_values(const Instance& inst) {
  const double lo = inst.min_value();
  if (lo >= 0.0) return inst;
  Instance out = inst;
  const double shift = -lo;
  for (auto it = out.table_.begin() + 1; it != out.table_.end(); ++it) *it += shift;
  out.shift_ = inst.shift_ + shift;
  return out;
}

/// Stirling numbers of the second kind, row n: result[i] = Z(n, i), i in [0, n].
inline std::vector<BigInt> stirling2_row(int n) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  std::vector<BigInt> row{1};  // Z(0, 0) = 1
  for (int m = 1; m <= n; ++m) {
    std::vector<BigInt> next(m + 1, 0);
    for (int i = 1; i <= m; ++i) {
      next[i] = BigInt(i) * (i < m ? row[i] : BigInt(0)) + row[i - 1];
    }
    row = std::move(next);
  }
  return row;
}

inline BigInt stirling2(int n, int i) {
  if (n < 1 || i < 1 || i > n) {
    throw std::out_of_range("stirling2 requires 1 <= i <= n");
  }
  return stirling2_row(n)[i];
}

/// Number of coalition structures over n agents (the Bell number).
inline BigInt count_structures(int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  BigInt total = 0;
  for (const auto& z : stirling2_row(n)) total += z;
  return total;
}

/// Visits every restricted growth sequence of length n in lexicographic order.
/// The visitor receives the label span and the block masks (indexed by
/// label - 1); returning false stops the enumeration early.
template <typename Visitor>
bool for_each_rgs(int n, Visitor&& visit, int exact_blocks = 0) {
  std::vector<int> labels(n, 0);
  std::vector<Mask> blocks;
  blocks.reserve(n);
  auto rec = [&](auto&& self, int agent) -> bool {
    const int k = static_cast<int>(blocks.size());
    if (agent > n) {
      if (exact_blocks && k != exact_blocks) return true;
      return visit(std::span<const int>(labels), std::span<const Mask>(blocks));
    }
    const Mask bit = agent_bit(agent, n);
    const int remaining = n - agent + 1;
    for (int j = 0; j < k; ++j) {
      if (exact_blocks && remaining - 1 < exact_blocks - k) break;
      labels[agent - 1] = j + 1;
      blocks[j] |= bit;
      const bool go_on = self(self, agent + 1);
      blocks[j] &= ~bit;
      if (!go_on) return false;
    }
    if (!exact_blocks || k < exact_blocks) {
      labels[agent - 1] = k + 1;
      blocks.push_back(bit);
      const bool go_on = self(self, agent + 1);
      blocks.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  return rec(rec, 1);
}

}  // namespace csg
