#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stableprobe/baselines.hpp"
#include "stableprobe/table.hpp"

namespace stableprobe {

/// Fixed-capacity LRU cache that threads its recency list directly through
/// the hash table: every entry stores the slot indices of its neighbors.
/// This only works because the table never moves occupied slots — a handle
/// taken at insert stays correct until the entry is evicted.
///
/// The eviction variant is selectable so tests can demonstrate the failure
/// mode: backed by shift deletion, the stored indices dangle and validate()
/// reports broken links.
template <class Key, class Value, class Hash>
class LruCache {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Entry {
    Value value{};
    std::size_t prev = npos;  // toward the head (more recent)
    std::size_t next = npos;  // toward the tail (less recent)
  };

  using TableType = Table<Key, Entry, Hash>;

  /// Table size that keeps churn at a load factor of at most ~0.7.
  static std::size_t table_capacity_for(std::size_t capacity) {
    const std::size_t m = capacity + capacity / 2 + (capacity % 2 != 0) + 1;
    return m < 8 ? 8 : m;
  }

  LruCache(std::size_t capacity, Hash hash, Variant eviction = Variant::Minimal)
      : table_(table_capacity_for(capacity), std::move(hash)),
        capacity_(capacity),
        eviction_(eviction) {
    if (capacity == 0) throw std::invalid_argument("cache capacity must be positive");
  }

  /// Inserts or refreshes a key at the head of the recency list, evicting
  /// the least recently used entry first when the cache is full.
  void put(const Key& key, Value value) {
    auto found = table_.find(key);
    if (found.ref) {
      table_.value_at(*found.ref).value = std::move(value);
      move_to_head(found.ref->index);
      return;
    }
    if (size() == capacity_) evict_tail();
    auto res = table_.insert(key, Entry{std::move(value)});
    link_head(res.ref.index);
  }

  /// Returns the value and marks the entry most recently used.
  std::optional<Value> get(const Key& key) {
    auto found = table_.find(key);
    if (!found.ref) return std::nullopt;
    move_to_head(found.ref->index);
    return table_.read(*found.ref).second.value;
  }

  std::size_t size() const { return table_.size(); }
  std::size_t capacity() const { return capacity_; }

  std::optional<SlotRef> head() const {
    return head_ == npos ? std::nullopt : std::optional<SlotRef>{SlotRef{head_}};
  }
  std::optional<SlotRef> tail() const {
    return tail_ == npos ? std::nullopt : std::optional<SlotRef>{SlotRef{tail_}};
  }

  const TableType& table() const { return table_; }

  /// Keys in recency order, most recent first.
  std::vector<Key> keys() const {
    std::vector<Key> out;
    out.reserve(size());
    for (std::size_t i = head_; i != npos && out.size() <= size();
         i = table_.value_at(SlotRef{i}).next) {
      out.push_back(table_.read(SlotRef{i}).first);
    }
    return out;
  }

  /// Walks the recency list in both directions and cross-checks every link
  /// against the table. Returns a description of the first inconsistency,
  /// or nullopt when the structure is intact. This is the executable
  /// witness of referential integrity: it must keep passing under minimal
  /// eviction and it breaks once entries are moved under shift eviction.
  std::optional<std::string> validate() const {
    const std::size_t n = table_.size();
    if ((head_ == npos) != (n == 0) || (tail_ == npos) != (n == 0))
      return fail("head/tail set inconsistently with entry count");

    std::size_t walked = 0;
    std::size_t prev = npos;
    std::size_t i = head_;
    while (i != npos) {
      if (walked == n) return fail("forward walk visits more slots than entries");
      if (i >= table_.capacity() || table_.state(i) != SlotState::Occupied)
        return fail("link points at slot " + std::to_string(i) + " which is not occupied");
      const Entry& e = table_.value_at(SlotRef{i});
      if (e.prev != prev)
        return fail("slot " + std::to_string(i) + " has a wrong back link");
      prev = i;
      i = e.next;
      ++walked;
    }
    if (walked != n) return fail("forward walk misses entries");
    if (n != 0 && prev != tail_) return fail("forward walk does not end at the tail");
    return std::nullopt;
  }

 private:
  std::optional<std::string> fail(std::string msg) const { return {std::move(msg)}; }

  Entry& entry(std::size_t i) { return table_.value_at(SlotRef{i}); }

  void link_head(std::size_t i) {
    Entry& e = entry(i);
    e.prev = npos;
    e.next = head_;
    if (head_ != npos) entry(head_).prev = i;
    head_ = i;
    if (tail_ == npos) tail_ = i;
  }

  void unlink(std::size_t i) {
    Entry& e = entry(i);
    if (e.prev != npos) entry(e.prev).next = e.next; else head_ = e.next;
    if (e.next != npos) entry(e.next).prev = e.prev; else tail_ = e.prev;
    e.prev = e.next = npos;
  }

  void move_to_head(std::size_t i) {
    if (head_ == i) return;
    unlink(i);
    link_head(i);
  }

  void evict_tail() {
    const std::size_t victim = tail_;
    const Key key = table_.read(SlotRef{victim}).first;
    unlink(victim);
    remove_variant(table_, key, eviction_);
  }

  TableType table_;
  std::size_t capacity_;
  Variant eviction_;
  std::size_t head_ = npos;
  std::size_t tail_ = npos;
};

}  // namespace stableprobe
