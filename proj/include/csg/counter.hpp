#pragma once

#include <cstdint>

namespace csg {

enum class Phase { construction, local_search, relink };

/// Run length in operations: one operation is one candidate coalition
/// structure whose value gets computed.
struct OperationCounter {
  std::uint64_t construction = 0;
  std::uint64_t local_search = 0;
  std::uint64_t relink = 0;

  std::uint64_t total() const { return construction + local_search + relink; }

  void add(Phase phase, std::uint64_t ops) {
    switch (phase) {
      case Phase::construction: construction += ops; break;
      case Phase::local_search: local_search += ops; break;
      case Phase::relink: relink += ops; break;
    }
  }

  friend bool operator==(const OperationCounter&, const OperationCounter&) = default;
};

}  // namespace csg
