#pragma once

// Instance generation under the five value distributions, and the text
// instance format:
//
//   CSG1
//   n <int>
//   dist <U|US|N|NS|ND|custom>
//   seed <uint64|none>
//   <index> <value>          one line per index 1 .. 2^n - 1, ascending
//
// Values are written with 17 significant digits, which round-trips doubles.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "csg/core.hpp"
#include "csg/rng.hpp"

namespace csg {

/// One draw of v(C) for a coalition of `size` agents; negative draws clamp to 0.
///   U:  U(0,1)          US: size * U(0,1)
///   N:  N(1, 0.1^2)     NS: size * N(1, 0.1^2)
///   ND: N(size, size)   (standard deviation sqrt(size))
inline double sample_value(Distribution kind, int size, Rng& rng) {
  if (size < 1) throw std::invalid_argument("coalition size must be at least 1");
  double draw;
  switch (kind) {
    case Distribution::uniform:
      draw = rng.uniform();
      break;
    case Distribution::uniform_scaled:
      draw = size * rng.uniform();
      break;
    case Distribution::normal:
      draw = rng.normal(1.0, 0.1);
      break;
    case Distribution::normal_scaled:
      draw = size * rng.normal(1.0, 0.1);
      break;
    case Distribution::normally_distributed:
      draw = rng.normal(size, std::sqrt(static_cast<double>(size)));
      break;
    default:
      throw std::invalid_argument("cannot sample from distribution '" +
                                  std::string(to_string(kind)) + "'");
  }
  return draw < 0.0 ? 0.0 : draw;
}

/// Fills v(1) .. v(2^n - 1) in ascending index order from a single stream.
inline Instance generate_instance(int n, Distribution kind, std::uint64_t seed) {
  if (n < 1 || n > kMaxAgents) {
    throw std::invalid_argument("agent count must be in [1, " + std::to_string(kMaxAgents) + "]");
  }
  Rng rng(seed);
  std::vector<double> values(full_mask(n));
  for (Mask c = 1; c <= full_mask(n); ++c) {
    values[c - 1] = sample_value(kind, std::popcount(c), rng);
  }
  return Instance(n, values, kind, seed);
}

class InstanceFormatError : public std::runtime_error {
 public:
  InstanceFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, end);
}

inline void write_instance(const Instance& inst, std::ostream& out) {
  out << "CSG1\n";
  out << "n " << inst.agents() << '\n';
  out << "dist " << to_string(inst.distribution()) << '\n';
  if (inst.seed()) {
    out << "seed " << *inst.seed() << '\n';
  } else {
    out << "seed none\n";
  }
  const auto values = inst.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i + 1) << ' ' << format_double(values[i]) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing instance");
}

namespace detail {

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

/// Splits "key value" on the first run of blanks.
inline bool split_pair(std::string_view line, std::string_view& key, std::string_view& value) {
  const auto sp = line.find_first_of(" \t");
  if (sp == std::string_view::npos) return false;
  key = line.substr(0, sp);
  value = trim(line.substr(sp + 1));
  return !value.empty();
}

}  // namespace detail

inline Instance read_instance(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  auto next_line = [&](const char* what) -> std::string_view {
    if (!std::getline(in, raw)) {
      throw InstanceFormatError(line_no + 1, std::string("unexpected end of file, expected ") + what);
    }
    ++line_no;
    return detail::trim(raw);
  };

  if (next_line("magic") != "CSG1") throw InstanceFormatError(line_no, "malformed header: missing CSG1 magic");

  std::string_view key, value;
  if (!detail::split_pair(next_line("agent count"), key, value) || key != "n") {
    throw InstanceFormatError(line_no, "malformed header: expected 'n <int>'");
  }
  int n = 0;
  if (!detail::parse_number(value, n) || n < 1 || n > kMaxAgents) {
    throw InstanceFormatError(line_no, "malformed header: agent count must be in [1, " +
                                           std::to_string(kMaxAgents) + "]");
  }

  if (!detail::split_pair(next_line("distribution"), key, value) || key != "dist") {
    throw InstanceFormatError(line_no, "malformed header: expected 'dist <tag>'");
  }
  const auto dist = parse_distribution(value);
  if (!dist) throw InstanceFormatError(line_no, "malformed header: unknown distribution '" + std::string(value) + "'");

  if (!detail::split_pair(next_line("seed"), key, value) || key != "seed") {
    throw InstanceFormatError(line_no, "malformed header: expected 'seed <uint64|none>'");
  }
  std::optional<std::uint64_t> seed;
  if (value != "none") {
    std::uint64_t s = 0;
    if (!detail::parse_number(value, s)) throw InstanceFormatError(line_no, "malformed header: bad seed");
    seed = s;
  }

  const std::size_t expected = full_mask(n);
  std::vector<double> values;
  values.reserve(expected);
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) continue;
    if (values.size() == expected) {
      throw InstanceFormatError(line_no, "wrong value count: more than " + std::to_string(expected) + " values");
    }
    std::string_view idx_text, val_text;
    std::size_t idx = 0;
    double v = 0.0;
    if (!detail::split_pair(line, idx_text, val_text) || !detail::parse_number(idx_text, idx) ||
        !detail::parse_number(val_text, v)) {
      throw InstanceFormatError(line_no, "parse failure: expected '<index> <value>'");
    }
    if (idx != values.size() + 1) {
      throw InstanceFormatError(line_no, "expected index " + std::to_string(values.size() + 1) +
                                             ", got " + std::to_string(idx));
    }
    if (!std::isfinite(v)) throw InstanceFormatError(line_no, "non-finite value");
    if (v < 0.0) throw InstanceFormatError(line_no, "negative value (normalize the instance first)");
    values.push_back(v);
  }
  if (values.size() != expected) {
    throw InstanceFormatError(line_no, "wrong value count: expected " + std::to_string(expected) +
                                           ", got " + std::to_string(values.size()));
  }
  return Instance(n, values, *dist, seed);
}

}  // namespace csg
