#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stableprobe {

enum class SlotState : std::uint8_t { Empty, Tombstone, Occupied };

/// Stable handle to an occupied slot. Stays valid, with the same index,
/// from the insert that produced it until that key is removed.
struct SlotRef {
  std::size_t index;

  friend bool operator==(SlotRef a, SlotRef b) { return a.index == b.index; }
  friend bool operator!=(SlotRef a, SlotRef b) { return a.index != b.index; }
};

enum class InsertOutcome : std::uint8_t { Inserted, Updated };

struct TableFullError : std::runtime_error {
  TableFullError()
      : std::runtime_error("table full: the last empty slot cannot be consumed") {}
};

struct StaleHandleError : std::runtime_error {
  explicit StaleHandleError(std::size_t index)
      : std::runtime_error("slot " + std::to_string(index) + " is not occupied") {}
};

template <class Key, class Value, class Hash>
class Table;

template <class Key, class Value, class Hash>
bool remove_naive(Table<Key, Value, Hash>& table, const Key& key);

template <class Key, class Value, class Hash>
bool remove_shift(Table<Key, Value, Hash>& table, const Key& key);

/// Fixed-capacity linear-probing hash table that never moves stored
/// elements. remove() marks the vacated slot with a tombstone and then
/// erases every tombstone in the affected range that no surviving element's
/// probe path depends on, so handles stay valid while probe lengths stay
/// bounded under churn.
///
/// Two invariants hold after every operation:
///  - search: for an element stored at slot i with hash position h, every
///    slot cyclically in [h, i) is non-empty;
///  - minimality: every tombstone at slot k has a justifying element, i.e.
///    an occupied slot cyclically right of k within k's run whose hash
///    position is at k or cyclically left of it.
///
/// One slot is always kept empty so unsuccessful searches terminate; an
/// insert that would consume the last empty slot throws TableFullError.
/// Hash must map every key to [0, capacity); it is injected at construction
/// and owned by the table.
///
/// A table instance is exclusively owned by one thread at a time. Concurrent
/// const access with no writer is safe.
template <class Key, class Value, class Hash>
class Table {
 public:
  struct FindResult {
    std::optional<SlotRef> ref;
    std::size_t probes;  // slots inspected, including the terminating one
  };

  struct InsertResult {
    SlotRef ref;
    InsertOutcome outcome;
  };

  Table(std::size_t capacity, Hash hash)
      : slots_(checked_capacity(capacity)),
        hash_(std::move(hash)),
        empty_count_(capacity) {}

  /// Scans cyclically from the key's hash position; stops at the key or at
  /// the first empty slot. Tombstones are inspected but never match.
  FindResult find(const Key& key) const {
    std::size_t i = hash_value(key);
    std::size_t probes = 0;
    for (std::size_t step = 0; step < slots_.size(); ++step) {
      const Slot& s = slots_[i];
      ++probes;
      if (s.state == SlotState::Empty) return {std::nullopt, probes};
      if (s.state == SlotState::Occupied && s.key == key) return {SlotRef{i}, probes};
      i = next(i);
    }
    return {std::nullopt, probes};  // full wrap; only possible with no empty slot
  }

  /// Places a new element into the first non-occupied slot on its probe
  /// path, or updates the value in place if the key is already stored. The
  /// scan always continues to the terminating empty slot before committing
  /// to a remembered tombstone, so duplicates cannot be created.
  InsertResult insert(const Key& key, Value value) {
    const std::size_t home = hash_value(key);
    std::size_t i = home;
    std::optional<std::size_t> reuse;
    for (std::size_t step = 0; step < slots_.size(); ++step) {
      Slot& s = slots_[i];
      if (s.state == SlotState::Occupied) {
        if (s.key == key) {
          s.value = std::move(value);
          return {SlotRef{i}, InsertOutcome::Updated};
        }
      } else if (s.state == SlotState::Tombstone) {
        if (!reuse) reuse = i;
      } else {
        return {place(reuse ? *reuse : i, home, key, std::move(value)),
                InsertOutcome::Inserted};
      }
      i = next(i);
    }
    if (reuse) return {place(*reuse, home, key, std::move(value)), InsertOutcome::Inserted};
    throw TableFullError();
  }

  /// Tombstone-minimizing deletion. The vacated slot becomes a tombstone,
  /// then one pass to the right and one pass back to the key's hash position
  /// erase every tombstone in [hash, i] that no element still needs.
  ///
  /// Position comparisons are offsets from the start of the run containing
  /// i (the slot after the nearest empty slot to the left), fixed before any
  /// tombstone is cleared; this turns cyclic left/right tests into plain
  /// integer comparisons.
  bool remove(const Key& key) {
    const std::size_t home = hash_value(key);
    std::size_t i = home;
    for (std::size_t step = 0; step < slots_.size(); ++step) {
      const Slot& s = slots_[i];
      if (s.state == SlotState::Empty) return false;
      if (s.state == SlotState::Occupied && s.key == key) break;
      if (step + 1 == slots_.size()) return false;
      i = next(i);
    }

    std::size_t run_start = home;
    for (std::size_t step = 0; step + 1 < slots_.size(); ++step) {
      if (slots_[prev(run_start)].state == SlotState::Empty) break;
      run_start = prev(run_start);
    }

    slots_[i].state = SlotState::Tombstone;
    --element_count_;
    ++tombstone_count_;

    // Rightward: collect the leftmost hash position of any element between
    // i and the end of the run. "None seen" compares as right of everything.
    std::optional<std::size_t> min_home_off;
    for (std::size_t j = next(i); slots_[j].state != SlotState::Empty; j = next(j)) {
      if (slots_[j].state == SlotState::Occupied)
        fold_min(min_home_off, offset(run_start, slots_[j].home));
    }

    // Leftward from i to the key's hash position: clear each tombstone whose
    // offset every hash position seen so far lies strictly right of, and keep
    // folding in the hash positions of elements passed on the way.
    std::size_t k = i;
    const std::size_t span = offset(home, i);
    for (std::size_t step = 0; step <= span; ++step) {
      Slot& s = slots_[k];
      if (s.state == SlotState::Tombstone) {
        if (!min_home_off || *min_home_off > offset(run_start, k)) {
          s.state = SlotState::Empty;
          --tombstone_count_;
          ++empty_count_;
        }
      } else {
        assert(s.state == SlotState::Occupied);
        fold_min(min_home_off, offset(run_start, s.home));
      }
      k = prev(k);
    }
    return true;
  }

  /// Constant-time access through a handle; no probing.
  std::pair<const Key&, const Value&> read(SlotRef ref) const {
    const Slot& s = checked_slot(ref);
    return {s.key, s.value};
  }

  /// In-place value access through a handle, e.g. for payloads that carry
  /// slot indices of other entries.
  Value& value_at(SlotRef ref) { return checked_slot(ref).value; }
  const Value& value_at(SlotRef ref) const { return checked_slot(ref).value; }

  std::size_t capacity() const { return slots_.size(); }
  std::size_t size() const { return element_count_; }
  std::size_t tombstone_count() const { return tombstone_count_; }
  std::size_t empty_count() const { return empty_count_; }

  SlotState state(std::size_t i) const { return slots_[i].state; }

  /// Key stored at slot i; the slot must be occupied.
  const Key& key_at(std::size_t i) const {
    assert(slots_[i].state == SlotState::Occupied);
    return slots_[i].key;
  }

  /// Hash position cached when the element at slot i was inserted.
  std::size_t home_at(std::size_t i) const {
    assert(slots_[i].state == SlotState::Occupied);
    return slots_[i].home;
  }

  /// Applies the injected hash; result is checked against [0, capacity).
  std::size_t hash_value(const Key& key) const {
    const auto h = static_cast<std::size_t>(hash_(key));
    if (h >= slots_.size()) throw std::out_of_range("hash value outside [0, capacity)");
    return h;
  }

  const Hash& hash_function() const { return hash_; }

  /// One line per slot: index<TAB>state<TAB>key-or-dash<TAB>hash-or-dash.
  void dump(std::ostream& os) const {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      const Slot& s = slots_[i];
      os << i << '\t';
      switch (s.state) {
        case SlotState::Empty:
          os << "empty\t-\t-";
          break;
        case SlotState::Tombstone:
          os << "tombstone\t-\t-";
          break;
        case SlotState::Occupied:
          os << "occupied\t" << s.key << '\t' << s.home;
          break;
      }
      os << '\n';
    }
  }

  std::string dump() const {
    std::ostringstream os;
    dump(os);
    return os.str();
  }

 private:
  struct Slot {
    SlotState state = SlotState::Empty;
    std::size_t home = 0;  // meaningful only when occupied
    Key key{};
    Value value{};
  };

  static std::size_t checked_capacity(std::size_t capacity) {
    if (capacity < 2)
      throw std::invalid_argument("table capacity must be at least 2");
    return capacity;
  }

  std::size_t next(std::size_t i) const { return i + 1 == slots_.size() ? 0 : i + 1; }
  std::size_t prev(std::size_t i) const { return i == 0 ? slots_.size() - 1 : i - 1; }

  // cyclic distance walking right from `from` to `to`
  std::size_t offset(std::size_t from, std::size_t to) const {
    return to >= from ? to - from : to + slots_.size() - from;
  }

  static void fold_min(std::optional<std::size_t>& acc, std::size_t v) {
    if (!acc || v < *acc) acc = v;
  }

  SlotRef place(std::size_t target, std::size_t home, const Key& key, Value value) {
    Slot& s = slots_[target];
    if (s.state == SlotState::Empty) {
      if (empty_count_ == 1) throw TableFullError();
      --empty_count_;
    } else {
      --tombstone_count_;
    }
    s.state = SlotState::Occupied;
    s.home = home;
    s.key = key;
    s.value = std::move(value);
    ++element_count_;
    return SlotRef{target};
  }

  Slot& checked_slot(SlotRef ref) {
    if (ref.index >= slots_.size() || slots_[ref.index].state != SlotState::Occupied)
      throw StaleHandleError(ref.index);
    return slots_[ref.index];
  }
  const Slot& checked_slot(SlotRef ref) const {
    if (ref.index >= slots_.size() || slots_[ref.index].state != SlotState::Occupied)
      throw StaleHandleError(ref.index);
    return slots_[ref.index];
  }

  friend bool remove_naive<Key, Value, Hash>(Table& table, const Key& key);
  friend bool remove_shift<Key, Value, Hash>(Table& table, const Key& key);

  std::vector<Slot> slots_;
  Hash hash_;
  std::size_t element_count_ = 0;
  std::size_t tombstone_count_ = 0;
  std::size_t empty_count_ = 0;
};

}  // namespace stableprobe
