#include "stableprobe/workload.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <list>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "stableprobe/lru_cache.hpp"
#include "stableprobe/oracle.hpp"

namespace stableprobe {

namespace {

// stream tags so the hash, the deletion policy and the op mix draw from
// independent sequences of the same user seed
constexpr std::uint64_t kPolicyTag = 0x706f6c696379ULL;
constexpr std::uint64_t kOpsTag = 0x6f7073ULL;
constexpr std::uint64_t kValueTag = 0x76616c7565ULL;

std::uint64_t draw_bounded(std::mt19937_64& gen, std::uint64_t n) {
  return detail::bounded(gen(), n);
}

MetricsRecord measure(const BenchTable& table, std::uint64_t deletions) {
  const ProbeCosts costs = exact_probe_costs(table);
  return MetricsRecord{
      deletions,
      costs.successful.value_or(0.0),
      costs.unsuccessful.value_or(0.0),
      table.tombstone_count(),
      table.size(),
  };
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_u64(std::string& out, std::uint64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

constexpr std::string_view kCsvHeader =
    "deletions,avg_successful,avg_unsuccessful,tombstones,elements";

std::string_view next_field(std::string_view& rest, std::size_t line_no) {
  if (rest.empty())
    throw std::invalid_argument("csv line " + std::to_string(line_no) + ": missing field");
  const std::size_t comma = rest.find(',');
  std::string_view field = rest.substr(0, comma);
  rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  return field;
}

template <class T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                ": bad number '" + std::string(field) + "'");
  return value;
}

}  // namespace

std::size_t WorkloadConfig::target_elements() const {
  return static_cast<std::size_t>(std::llround(alpha * static_cast<double>(capacity)));
}

void WorkloadConfig::validate() const {
  if (capacity < 2) throw std::invalid_argument("capacity must be at least 2");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0, 1)");
  const std::size_t n = target_elements();
  if (n < 1) throw std::invalid_argument("round(alpha*m) must be at least 1");
  if (n > capacity - 1)
    throw std::invalid_argument("round(alpha*m) must leave one slot empty");
  if (measure_every < 1) throw std::invalid_argument("measure_every must be at least 1");
}

WorkloadResult run_workload(const WorkloadConfig& config) {
  config.validate();
  const std::size_t n = config.target_elements();

  BenchTable table(config.capacity, TabulatedHash(config.seed, config.capacity));
  std::uint64_t next_key = 0;
  for (; next_key < n; ++next_key) table.insert(next_key, next_key);

  // FIFO deletes the oldest surviving key; since keys are a monotone
  // counter that is just the next undeleted one. Random keeps the survivor
  // set explicitly and swap-removes a uniform pick.
  std::uint64_t oldest = 0;
  std::vector<std::uint64_t> alive;
  std::mt19937_64 pick(detail::mix_seed(config.seed, kPolicyTag));
  if (config.policy == DeletePolicy::Random) {
    alive.reserve(n + 1);
    for (std::uint64_t k = 0; k < n; ++k) alive.push_back(k);
  }

  WorkloadResult result;
  result.records.push_back(measure(table, 0));

  std::uint64_t deletions = 0;
  for (std::uint64_t round = 1; round <= config.rounds; ++round) {
    std::uint64_t victim;
    if (config.policy == DeletePolicy::Fifo) {
      victim = oldest++;
    } else {
      const std::size_t idx = draw_bounded(pick, alive.size());
      victim = alive[idx];
      alive[idx] = alive.back();
      alive.pop_back();
    }
    if (!remove_variant(table, victim, config.variant))
      throw std::logic_error("workload victim key missing from table");
    ++deletions;

    try {
      table.insert(next_key, next_key);
      if (config.policy == DeletePolicy::Random) alive.push_back(next_key);
      ++next_key;
    } catch (const TableFullError&) {
      result.saturated = true;
      result.records.push_back(measure(table, deletions));
      return result;
    }

    if (round % config.measure_every == 0)
      result.records.push_back(measure(table, deletions));
  }
  if (config.rounds > 0 && config.rounds % config.measure_every != 0)
    result.records.push_back(measure(table, deletions));
  return result;
}

std::string to_csv(const std::vector<MetricsRecord>& records) {
  std::string out{kCsvHeader};
  out.push_back('\n');
  for (const MetricsRecord& r : records) {
    append_u64(out, r.deletions);
    out.push_back(',');
    append_double(out, r.avg_successful);
    out.push_back(',');
    append_double(out, r.avg_unsuccessful);
    out.push_back(',');
    append_u64(out, r.tombstones);
    out.push_back(',');
    append_u64(out, r.elements);
    out.push_back('\n');
  }
  return out;
}

void emit_csv(const std::vector<MetricsRecord>& records, std::ostream& out) {
  const std::string text = to_csv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("writing csv output failed");
}

std::vector<MetricsRecord> parse_csv(std::string_view text) {
  std::vector<MetricsRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line_no == 1) {
      if (line != kCsvHeader)
        throw std::invalid_argument("csv header mismatch: '" + std::string(line) + "'");
      continue;
    }
    if (line.empty()) continue;
    MetricsRecord r;
    r.deletions = parse_number<std::uint64_t>(next_field(line, line_no), line_no);
    r.avg_successful = parse_number<double>(next_field(line, line_no), line_no);
    r.avg_unsuccessful = parse_number<double>(next_field(line, line_no), line_no);
    r.tombstones = parse_number<std::uint64_t>(next_field(line, line_no), line_no);
    r.elements = parse_number<std::uint64_t>(next_field(line, line_no), line_no);
    if (!line.empty())
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": trailing fields");
    records.push_back(r);
  }
  if (line_no == 0) throw std::invalid_argument("csv input is empty");
  return records;
}

CheckReport run_invariant_check(std::uint64_t seed, std::uint64_t ops, std::size_t capacity) {
  BenchTable table(capacity, TabulatedHash(seed, capacity));
  std::mt19937_64 gen(detail::mix_seed(seed, kOpsTag));

  std::unordered_map<std::uint64_t, std::uint64_t> reference;
  std::unordered_map<std::uint64_t, std::size_t> expected_slot;
  std::vector<std::uint64_t> alive;
  std::unordered_map<std::uint64_t, std::size_t> alive_pos;
  std::uint64_t next_key = 0;
  // keys in the top half of the key space are never inserted
  constexpr std::uint64_t kAbsentBit = std::uint64_t{1} << 63;

  CheckReport report;
  auto fail = [&](std::uint64_t op, const std::string& what) {
    report.ok = false;
    report.ops_run = op;
    report.message = "op " + std::to_string(op) + ": " + what;
    return report;
  };

  auto pick_present = [&]() -> std::optional<std::uint64_t> {
    if (alive.empty()) return std::nullopt;
    return alive[draw_bounded(gen, alive.size())];
  };

  for (std::uint64_t op = 1; op <= ops; ++op) {
    const std::uint64_t dice = draw_bounded(gen, 100);
    if (dice < 45) {
      const std::uint64_t key = next_key++;
      const std::uint64_t value = detail::mix_seed(seed ^ kValueTag, key);
      try {
        auto res = table.insert(key, value);
        if (res.outcome != InsertOutcome::Inserted)
          return fail(op, "fresh insert reported an update");
        reference[key] = value;
        expected_slot[key] = res.ref.index;
        alive_pos[key] = alive.size();
        alive.push_back(key);
      } catch (const TableFullError&) {
        if (table.empty_count() != 1)
          return fail(op, "table-full thrown with more than one empty slot");
      }
    } else if (dice < 80) {
      const bool try_present = draw_bounded(gen, 2) == 0;
      std::optional<std::uint64_t> present = try_present ? pick_present() : std::nullopt;
      if (present) {
        if (!table.remove(*present)) return fail(op, "present key failed to remove");
        reference.erase(*present);
        expected_slot.erase(*present);
        const std::size_t pos = alive_pos[*present];
        alive_pos[alive.back()] = pos;
        alive[pos] = alive.back();
        alive.pop_back();
        alive_pos.erase(*present);
      } else {
        const std::uint64_t key = kAbsentBit | gen();
        const std::string before = table.dump();
        if (table.remove(key)) return fail(op, "absent key reported removed");
        if (table.dump() != before)
          return fail(op, "remove of an absent key changed the table");
      }
    } else {
      const bool try_present = draw_bounded(gen, 2) == 0;
      std::optional<std::uint64_t> present = try_present ? pick_present() : std::nullopt;
      const std::uint64_t key = present ? *present : (kAbsentBit | gen());
      auto res = table.find(key);
      if (res.probes > table.capacity()) return fail(op, "find exceeded capacity probes");
      const auto it = reference.find(key);
      if (it == reference.end()) {
        if (res.ref) return fail(op, "find located a key the reference map lacks");
      } else {
        if (!res.ref) return fail(op, "find missed a stored key");
        if (res.ref->index != expected_slot[key])
          return fail(op, "key observed at a different slot than insert returned");
        if (table.read(*res.ref).second != it->second)
          return fail(op, "stored value differs from the reference map");
      }
    }

    if (table.empty_count() < 1) return fail(op, "no empty slot left");
    if (table.size() != reference.size())
      return fail(op, "element count differs from the reference map");
    const auto violations = check_invariants(table);
    if (!violations.empty()) return fail(op, format_violation(violations.front()));
  }
  report.ops_run = ops;
  return report;
}

std::uint64_t count_moved_elements(std::uint64_t seed, std::uint64_t ops, std::size_t capacity) {
  BenchTable table(capacity, TabulatedHash(seed, capacity));
  std::mt19937_64 gen(detail::mix_seed(seed, kOpsTag));

  std::unordered_map<std::uint64_t, std::size_t> insert_slot;
  std::vector<std::uint64_t> alive;
  std::uint64_t next_key = 0;
  std::uint64_t moved = 0;

  for (std::uint64_t op = 0; op < ops; ++op) {
    const bool grow = alive.size() < 2 || draw_bounded(gen, 100) < 55;
    if (grow && table.size() + 1 < capacity) {
      auto res = table.insert(next_key, next_key);
      insert_slot[next_key] = res.ref.index;
      alive.push_back(next_key);
      ++next_key;
    } else if (!alive.empty()) {
      const std::size_t idx = draw_bounded(gen, alive.size());
      const std::uint64_t victim = alive[idx];
      alive[idx] = alive.back();
      alive.pop_back();
      remove_shift(table, victim);
      insert_slot.erase(victim);
    }
    for (const std::uint64_t key : alive) {
      auto res = table.find(key);
      if (res.ref && res.ref->index != insert_slot[key]) {
        ++moved;
        insert_slot[key] = res.ref->index;  // count each move once
      }
    }
  }
  return moved;
}

namespace {

/// Plain map + recency list, the textbook reference the slot-linked cache
/// is checked against.
class ReferenceLru {
 public:
  explicit ReferenceLru(std::size_t capacity) : capacity_(capacity) {}

  void put(std::uint64_t key, std::uint64_t value) {
    auto it = map_.find(key);
    if (it != map_.end()) {
      it->second->second = value;
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    if (map_.size() == capacity_) {
      map_.erase(order_.back().first);
      order_.pop_back();
    }
    order_.emplace_front(key, value);
    map_[key] = order_.begin();
  }

  std::optional<std::uint64_t> get(std::uint64_t key) {
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
  }

  std::size_t size() const { return map_.size(); }

  std::vector<std::uint64_t> keys() const {
    std::vector<std::uint64_t> out;
    out.reserve(order_.size());
    for (const auto& kv : order_) out.push_back(kv.first);
    return out;
  }

 private:
  std::size_t capacity_;
  std::list<std::pair<std::uint64_t, std::uint64_t>> order_;
  std::unordered_map<std::uint64_t,
                     std::list<std::pair<std::uint64_t, std::uint64_t>>::iterator>
      map_;
};

}  // namespace

LruTraceReport run_lru_trace(std::uint64_t seed, std::uint64_t ops, std::size_t cache_capacity) {
  using Cache = LruCache<std::uint64_t, std::uint64_t, TabulatedHash>;
  const std::size_t m = Cache::table_capacity_for(cache_capacity);
  Cache cache(cache_capacity, TabulatedHash(seed, m));
  ReferenceLru reference(cache_capacity);

  std::mt19937_64 gen(detail::mix_seed(seed, kOpsTag));
  const std::uint64_t key_space = cache_capacity * 4;

  LruTraceReport report;
  auto fail = [&](std::uint64_t op, const std::string& what) {
    report.ok = false;
    report.ops_run = op;
    report.final_size = cache.size();
    report.message = "op " + std::to_string(op) + ": " + what;
    return report;
  };

  for (std::uint64_t op = 1; op <= ops; ++op) {
    const std::uint64_t key = draw_bounded(gen, key_space);
    if (draw_bounded(gen, 100) < 60) {
      const std::uint64_t value = gen();
      cache.put(key, value);
      reference.put(key, value);
    } else {
      const auto got = cache.get(key);
      const auto expected = reference.get(key);
      if (got != expected) return fail(op, "get result differs from the reference cache");
    }
    if (cache.size() != reference.size())
      return fail(op, "size differs from the reference cache");
    if (auto broken = cache.validate()) return fail(op, *broken);
    if (cache.keys() != reference.keys())
      return fail(op, "recency order differs from the reference cache");
  }
  report.ops_run = ops;
  report.final_size = cache.size();
  return report;
}

}  // namespace stableprobe
