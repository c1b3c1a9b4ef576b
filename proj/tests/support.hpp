#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stableprobe/table.hpp"

namespace stableprobe::testing {

// Hash with hand-picked positions per key; unknown keys fall back to key % m.
struct ScriptedHash {
  std::unordered_map<std::uint64_t, std::size_t> positions;
  std::size_t modulus;

  std::size_t operator()(std::uint64_t key) const {
    const auto it = positions.find(key);
    return it != positions.end() ? it->second : key % modulus;
  }
};

using ScriptedTable = Table<std::uint64_t, std::uint64_t, ScriptedHash>;

// Keys used throughout the slot-layout tests.
constexpr std::uint64_t kA = 1, kB = 2, kC = 3, kD = 4, kE = 5, kX = 99;

inline ScriptedHash setup_a_hash() {
  return ScriptedHash{{{kA, 2}, {kB, 2}, {kC, 3}, {kD, 2}, {kE, 3}, {kX, 2}}, 8};
}

// m=8, a@2, b@3, c@4: slots [_, _, a, b, c, _, _, _]
inline ScriptedTable make_setup_a() {
  ScriptedTable table(8, setup_a_hash());
  table.insert(kA, 100 + kA);
  table.insert(kB, 100 + kB);
  table.insert(kC, 100 + kC);
  return table;
}

// Hand-built slot array for oracle tests; can encode states the real table
// never produces, including wrong counters.
class FixtureTable {
 public:
  explicit FixtureTable(std::size_t capacity) : slots_(capacity) {}

  FixtureTable& occupied(std::size_t i, std::uint64_t key, std::size_t home) {
    slots_[i] = {SlotState::Occupied, key};
    homes_[key] = home;
    ++elements_;
    return *this;
  }
  FixtureTable& tombstone(std::size_t i) {
    slots_[i] = {SlotState::Tombstone, 0};
    ++tombstones_;
    return *this;
  }
  FixtureTable& counters(std::size_t elements, std::size_t tombstones) {
    elements_ = elements;
    tombstones_ = tombstones;
    return *this;
  }

  std::size_t capacity() const { return slots_.size(); }
  SlotState state(std::size_t i) const { return slots_[i].state; }
  const std::uint64_t& key_at(std::size_t i) const { return slots_[i].key; }
  std::size_t hash_value(const std::uint64_t& key) const { return homes_.at(key); }
  std::size_t size() const { return elements_; }
  std::size_t tombstone_count() const { return tombstones_; }
  std::size_t empty_count() const {
    std::size_t empties = 0;
    for (const auto& s : slots_)
      if (s.state == SlotState::Empty) ++empties;
    return empties;
  }

 private:
  struct FSlot {
    SlotState state = SlotState::Empty;
    std::uint64_t key = 0;
  };
  std::vector<FSlot> slots_;
  std::unordered_map<std::uint64_t, std::size_t> homes_;
  std::size_t elements_ = 0;
  std::size_t tombstones_ = 0;
};

// Compact state signature for layout assertions: one char per slot,
// '.' empty, 't' tombstone, keys by letter (a=1 ... z=26).
template <class TableT>
std::string layout(const TableT& table) {
  std::string out;
  for (std::size_t i = 0; i < table.capacity(); ++i) {
    switch (table.state(i)) {
      case SlotState::Empty: out.push_back('.'); break;
      case SlotState::Tombstone: out.push_back('t'); break;
      case SlotState::Occupied:
        out.push_back(static_cast<char>('a' + table.key_at(i) - 1));
        break;
    }
  }
  return out;
}

}  // namespace stableprobe::testing
