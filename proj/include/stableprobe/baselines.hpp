#pragma once

#include <cassert>
#include <cstdint>
#include <utility>

#include "stableprobe/table.hpp"

namespace stableprobe {

/// The three deletion disciplines a table can be driven with. Minimal is
/// Table::remove; the other two are the comparison extremes implemented
/// below against the same slot representation.
enum class Variant : std::uint8_t { Minimal, Naive, Shift };

constexpr const char* to_string(Variant v) {
  switch (v) {
    case Variant::Minimal: return "minimal";
    case Variant::Naive: return "naive";
    case Variant::Shift: return "shift";
  }
  return "?";
}

/// Folklore deletion: mark the slot and walk away. Handles stay valid, but
/// tombstones are never reclaimed, so the tombstone count is monotonically
/// non-decreasing over the table's lifetime.
template <class Key, class Value, class Hash>
bool remove_naive(Table<Key, Value, Hash>& table, const Key& key) {
  const std::size_t home = table.hash_value(key);
  std::size_t i = home;
  for (std::size_t step = 0; step < table.slots_.size(); ++step) {
    auto& s = table.slots_[i];
    if (s.state == SlotState::Empty) return false;
    if (s.state == SlotState::Occupied && s.key == key) {
      s.state = SlotState::Tombstone;
      --table.element_count_;
      ++table.tombstone_count_;
      return true;
    }
    i = table.next(i);
  }
  return false;
}

/// Tombstone-free deletion: vacates the slot and pulls later run members
/// backwards over the hole whenever their own probe path covers it. Keeps
/// the search invariant with zero tombstones, but moves elements, so slot
/// handles taken before the call may dangle or point at a different key.
///
/// The table must not contain tombstones (this variant never creates any).
template <class Key, class Value, class Hash>
bool remove_shift(Table<Key, Value, Hash>& table, const Key& key) {
  const std::size_t home = table.hash_value(key);
  std::size_t hole = home;
  for (std::size_t step = 0; step < table.slots_.size(); ++step) {
    const auto& s = table.slots_[hole];
    if (s.state == SlotState::Empty) return false;
    if (s.state == SlotState::Occupied && s.key == key) break;
    if (step + 1 == table.slots_.size()) return false;
    hole = table.next(hole);
  }

  for (std::size_t j = table.next(hole);
       table.slots_[j].state != SlotState::Empty; j = table.next(j)) {
    auto& s = table.slots_[j];
    assert(s.state == SlotState::Occupied);
    // movable iff its hash position is at the hole or cyclically left of it
    if (table.offset(s.home, j) >= table.offset(hole, j)) {
      auto& h = table.slots_[hole];
      h.state = SlotState::Occupied;
      h.home = s.home;
      h.key = std::move(s.key);
      h.value = std::move(s.value);
      hole = j;
    }
  }

  table.slots_[hole] = {};
  --table.element_count_;
  ++table.empty_count_;
  return true;
}

template <class Key, class Value, class Hash>
bool remove_variant(Table<Key, Value, Hash>& table, const Key& key, Variant variant) {
  switch (variant) {
    case Variant::Naive: return remove_naive(table, key);
    case Variant::Shift: return remove_shift(table, key);
    case Variant::Minimal: break;
  }
  return table.remove(key);
}

}  // namespace stableprobe
