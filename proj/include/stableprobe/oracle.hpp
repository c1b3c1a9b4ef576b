#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stableprobe/table.hpp"

namespace stableprobe {

enum class ViolationKind : std::uint8_t {
  UnjustifiedTombstone,
  SearchInvariantBreach,
  CounterMismatch,
};

constexpr const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnjustifiedTombstone: return "UnjustifiedTombstone";
    case ViolationKind::SearchInvariantBreach: return "SearchInvariantBreach";
    case ViolationKind::CounterMismatch: return "CounterMismatch";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::size_t index;
  std::string detail;
};

/// Test-log line format: kind<TAB>index<TAB>detail.
inline std::string format_violation(const Violation& v) {
  std::ostringstream os;
  os << to_string(v.kind) << '\t' << v.index << '\t' << v.detail;
  return os.str();
}

/// Read-only view the checkers need. Satisfied by Table and by hand-built
/// test fixtures; hash positions are recomputed through hash_value rather
/// than read from any cache the implementation keeps.
template <class T>
concept TableView = requires(const T& t, std::size_t i) {
  { t.capacity() } -> std::convertible_to<std::size_t>;
  { t.state(i) } -> std::convertible_to<SlotState>;
  { t.size() } -> std::convertible_to<std::size_t>;
  { t.tombstone_count() } -> std::convertible_to<std::size_t>;
  { t.empty_count() } -> std::convertible_to<std::size_t>;
  { t.hash_value(t.key_at(i)) } -> std::convertible_to<std::size_t>;
};

namespace oracle_detail {

inline std::size_t offset(std::size_t from, std::size_t to, std::size_t m) {
  return to >= from ? to - from : to + m - from;
}

}  // namespace oracle_detail

/// Direct evaluation of the tombstone-necessity condition: the tombstone at
/// slot k is justified iff some occupied slot cyclically right of k, before
/// the end of k's run, holds an element whose hash position is at k or
/// cyclically left of it. Pure; the table is not modified.
template <TableView T>
bool tombstone_justified(const T& table, std::size_t k) {
  const std::size_t m = table.capacity();
  if (k >= m || table.state(k) != SlotState::Tombstone)
    throw std::invalid_argument("slot " + std::to_string(k) + " is not a tombstone");

  auto next = [m](std::size_t i) { return i + 1 == m ? 0 : i + 1; };
  auto prev = [m](std::size_t i) { return i == 0 ? m - 1 : i - 1; };

  std::size_t run_start = k;
  for (std::size_t step = 0; step + 1 < m; ++step) {
    if (table.state(prev(run_start)) == SlotState::Empty) break;
    run_start = prev(run_start);
  }
  const std::size_t k_off = oracle_detail::offset(run_start, k, m);

  for (std::size_t p = next(k); table.state(p) != SlotState::Empty; p = next(p)) {
    if (p == k) break;  // full wrap, no empty slot in the table
    if (table.state(p) != SlotState::Occupied) continue;
    const std::size_t home = table.hash_value(table.key_at(p));
    if (oracle_detail::offset(run_start, home, m) <= k_off) return true;
  }
  return false;
}

/// Full-table scan returning every search-invariant breach, every
/// unjustified tombstone, and any counter mismatch. An empty result means
/// the table is valid and its tombstone set is minimal.
template <TableView T>
std::vector<Violation> check_invariants(const T& table) {
  std::vector<Violation> out;
  const std::size_t m = table.capacity();

  std::size_t occupied = 0, tombstones = 0, empties = 0;
  for (std::size_t i = 0; i < m; ++i) {
    switch (table.state(i)) {
      case SlotState::Occupied: ++occupied; break;
      case SlotState::Tombstone: ++tombstones; break;
      case SlotState::Empty: ++empties; break;
    }
  }
  auto mismatch = [&](const char* name, std::size_t stored, std::size_t actual) {
    if (stored != actual) {
      std::ostringstream os;
      os << name << " is " << stored << " but the slots hold " << actual;
      out.push_back({ViolationKind::CounterMismatch, 0, os.str()});
    }
  };
  mismatch("element_count", table.size(), occupied);
  mismatch("tombstone_count", table.tombstone_count(), tombstones);
  mismatch("empty_count", table.empty_count(), empties);
  if (empties == 0) {
    out.push_back({ViolationKind::CounterMismatch, 0,
                   "no empty slot; unsuccessful searches cannot terminate"});
    return out;
  }

  // distance from each slot to the first empty slot at or after it
  std::vector<std::size_t> dist(m, 0);
  std::size_t first_empty = 0;
  while (table.state(first_empty) != SlotState::Empty) ++first_empty;
  std::size_t s = first_empty;
  for (std::size_t step = 1; step < m; ++step) {
    const std::size_t left = s == 0 ? m - 1 : s - 1;
    dist[left] = table.state(left) == SlotState::Empty ? 0 : dist[s] + 1;
    s = left;
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (table.state(i) != SlotState::Occupied) continue;
    const std::size_t home = table.hash_value(table.key_at(i));
    const std::size_t displacement = oracle_detail::offset(home, i, m);
    if (dist[home] < displacement) {
      std::ostringstream os;
      os << "element hashes to " << home << " but slot "
         << (home + dist[home]) % m << " on its probe path is empty";
      out.push_back({ViolationKind::SearchInvariantBreach, i, os.str()});
    }
  }

  for (std::size_t k = 0; k < m; ++k) {
    if (table.state(k) != SlotState::Tombstone) continue;
    if (!tombstone_justified(table, k)) {
      out.push_back({ViolationKind::UnjustifiedTombstone, k,
                     "no element right of this tombstone hashes to it or left of it"});
    }
  }
  return out;
}

struct ProbeCosts {
  std::optional<double> successful;    // mean over stored elements
  std::optional<double> unsuccessful;  // mean over all start positions
};

/// Deterministic probe-cost averages, no sampling. Successful: mean over all
/// occupied slots of displacement+1. Unsuccessful: mean over every start
/// position of the distance to the first empty slot at or after it, plus
/// one for the terminating inspection. A component without a defined mean
/// (no elements / no empty slot) is reported as nullopt.
template <TableView T>
ProbeCosts exact_probe_costs(const T& table) {
  const std::size_t m = table.capacity();
  ProbeCosts costs;

  std::uint64_t probe_sum = 0, elements = 0;
  bool any_empty = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (table.state(i) == SlotState::Empty) {
      any_empty = true;
    } else if (table.state(i) == SlotState::Occupied) {
      const std::size_t home = table.hash_value(table.key_at(i));
      probe_sum += oracle_detail::offset(home, i, m) + 1;
      ++elements;
    }
  }
  if (elements > 0)
    costs.successful = static_cast<double>(probe_sum) / static_cast<double>(elements);

  if (any_empty) {
    std::size_t first_empty = 0;
    while (table.state(first_empty) != SlotState::Empty) ++first_empty;
    std::uint64_t dist_sum = 0;
    std::size_t d = 0;
    std::size_t s = first_empty;
    for (std::size_t step = 1; step < m; ++step) {
      const std::size_t left = s == 0 ? m - 1 : s - 1;
      d = table.state(left) == SlotState::Empty ? 0 : d + 1;
      dist_sum += d;
      s = left;
    }
    costs.unsuccessful =
        static_cast<double>(dist_sum + m) / static_cast<double>(m);
  }
  return costs;
}

}  // namespace stableprobe
