#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stableprobe/baselines.hpp"
#include "stableprobe/hash.hpp"
#include "stableprobe/table.hpp"

namespace stableprobe {

enum class DeletePolicy : std::uint8_t { Fifo, Random };

constexpr const char* to_string(DeletePolicy p) {
  return p == DeletePolicy::Fifo ? "fifo" : "random";
}

/// One churn experiment: fill a table to the target load factor, then
/// alternate deleting one element (per policy) with inserting a fresh one,
/// measuring exact probe costs along the way.
struct WorkloadConfig {
  std::size_t capacity = 1 << 16;  // m
  double alpha = 0.5;              // target load factor n/m, in (0, 1)
  DeletePolicy policy = DeletePolicy::Fifo;
  std::uint64_t rounds = 0;        // delete+insert rounds after the fill
  std::uint64_t measure_every = 1; // rounds between measurements
  std::uint64_t seed = 1;
  Variant variant = Variant::Minimal;

  std::size_t target_elements() const;  // round(alpha * capacity)
  void validate() const;                // throws std::invalid_argument
};

struct MetricsRecord {
  std::uint64_t deletions = 0;
  double avg_successful = 0.0;
  double avg_unsuccessful = 0.0;
  std::uint64_t tombstones = 0;
  std::uint64_t elements = 0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct WorkloadResult {
  std::vector<MetricsRecord> records;
  // A churn insert hit a full table (naive tables eventually do); the run
  // stopped early and the last record holds the state at that point.
  bool saturated = false;
};

using BenchTable = Table<std::uint64_t, std::uint64_t, TabulatedHash>;

/// Runs the configured churn experiment. Fully deterministic for a given
/// config. Records are appended after the initial fill, after every
/// measure_every rounds, and after the final round.
WorkloadResult run_workload(const WorkloadConfig& config);

/// CSV with header deletions,avg_successful,avg_unsuccessful,tombstones,
/// elements. Byte-deterministic for fixed input; doubles use the shortest
/// round-trip form.
void emit_csv(const std::vector<MetricsRecord>& records, std::ostream& out);
std::string to_csv(const std::vector<MetricsRecord>& records);

/// Inverse of emit_csv; throws std::invalid_argument on malformed input.
std::vector<MetricsRecord> parse_csv(std::string_view text);

struct CheckReport {
  bool ok = true;
  std::uint64_t ops_run = 0;
  std::string message;  // first failure, empty when ok
};

/// Randomized oracle-equivalence sweep: drives a minimal-deletion table and
/// a reference map through a mixed operation sequence (45% insert fresh,
/// 35% remove present/absent, 20% find), checking after every operation
/// that the invariant scan is clean, find agrees with the map, and every
/// element is still at the slot insert returned for it.
CheckReport run_invariant_check(std::uint64_t seed, std::uint64_t ops, std::size_t capacity);

/// Shift-deletion control for the handle-stability claim: runs churn on a
/// shift-backed table and counts elements later observed at a different
/// slot than the one insert returned. Nonzero is the expected outcome.
std::uint64_t count_moved_elements(std::uint64_t seed, std::uint64_t ops, std::size_t capacity);

struct LruTraceReport {
  bool ok = true;
  std::uint64_t ops_run = 0;
  std::size_t final_size = 0;
  std::string message;
};

/// Random put/get trace on the slot-linked LRU cache, checked against a
/// plain map+list reference after every operation (same contents, same
/// recency order, intact links).
LruTraceReport run_lru_trace(std::uint64_t seed, std::uint64_t ops, std::size_t cache_capacity);

}  // namespace stableprobe
