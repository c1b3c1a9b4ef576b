#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <unordered_map>

#include "stableprobe/baselines.hpp"
#include "stableprobe/oracle.hpp"
#include "support.hpp"

using namespace stableprobe;
using namespace stableprobe::testing;

TEST_CASE("naive removal marks and never cleans") {
  auto table = make_setup_a();

  CHECK(remove_naive(table, kB));
  CHECK(layout(table) == "..atc...");

  CHECK(remove_naive(table, kC));
  CHECK(layout(table) == "..att...");  // minimal removal would leave "..a....."
  CHECK(table.tombstone_count() == 2);

  const std::string before = table.dump();
  CHECK(!remove_naive(table, kX));
  CHECK(table.dump() == before);
}

TEST_CASE("shift removal pulls the run left and leaves no tombstones") {
  SUBCASE("inner element of a run") {
    auto table = make_setup_a();
    CHECK(remove_shift(table, kB));
    CHECK(layout(table) == "..ac....");
    CHECK(table.tombstone_count() == 0);
    CHECK(check_invariants(table).empty());
  }
  SUBCASE("element in its home slot is not pulled back") {
    ScriptedHash hash{{{kA, 2}, {kD, 4}}, 8};
    ScriptedTable table(8, hash);
    table.insert(kA, 0);
    table.insert(kD, 0);
    CHECK(remove_shift(table, kA));
    CHECK(layout(table) == "....d...");
  }
  SUBCASE("sole element leaves an all-empty table") {
    ScriptedTable table(8, setup_a_hash());
    table.insert(kA, 0);
    CHECK(remove_shift(table, kA));
    CHECK(layout(table) == "........");
    CHECK(table.size() == 0);
    CHECK(table.empty_count() == 8);
  }
  SUBCASE("absent key is a no-op") {
    auto table = make_setup_a();
    CHECK(!remove_shift(table, kX));
    CHECK(layout(table) == "..abc...");
  }
  SUBCASE("shift moves across the wrap-around boundary") {
    ScriptedHash hash{{{6, 6}, {7, 6}, {8, 6}}, 8};
    ScriptedTable table(8, hash);
    table.insert(6, 0);
    table.insert(7, 0);
    table.insert(8, 0);  // wraps to slot 0
    CHECK(layout(table) == "h.....fg");
    CHECK(remove_shift(table, 7));
    CHECK(layout(table) == "......fh");
    CHECK(check_invariants(table).empty());
  }
}

namespace {

struct ModHash {
  std::size_t modulus;
  std::size_t operator()(std::uint64_t key) const {
    return static_cast<std::size_t>(key % modulus);
  }
};

template <class RemoveFn>
void membership_matches_reference(std::uint64_t seed, RemoveFn remove_fn,
                                  bool expect_no_reclaim,
                                  bool expect_zero_tombstones) {
  const std::size_t m = 64;
  Table<std::uint64_t, std::uint64_t, ModHash> table(m, ModHash{m});
  std::unordered_map<std::uint64_t, std::uint64_t> reference;
  std::mt19937_64 gen(seed);
  std::vector<SlotState> previous(m, SlotState::Empty);

  for (int op = 0; op < 3000; ++op) {
    const std::uint64_t key = gen() % 150;
    if (gen() % 2 == 0) {
      try {
        table.insert(key, key);
        reference[key] = key;
      } catch (const TableFullError&) {
        CHECK(table.empty_count() == 1);
      }
    } else {
      const std::size_t tombstones_before = table.tombstone_count();
      const bool removed = remove_fn(table, key);
      CHECK(removed == (reference.erase(key) > 0));
      if (expect_no_reclaim)
        CHECK(table.tombstone_count() == tombstones_before + (removed ? 1 : 0));
    }

    if (expect_no_reclaim) {
      // naive never turns a tombstone back into an empty slot
      for (std::size_t i = 0; i < m; ++i) {
        if (previous[i] == SlotState::Tombstone)
          CHECK(table.state(i) != SlotState::Empty);
        previous[i] = table.state(i);
      }
    }
    if (expect_zero_tombstones) {
      CHECK(table.tombstone_count() == 0);
      // shift keeps the search invariant; with no tombstones the whole
      // invariant scan must stay clean
      const auto violations = check_invariants(table);
      if (!violations.empty()) FAIL(format_violation(violations.front()));
    }
    CHECK(table.size() == reference.size());
    for (const auto& [k, v] : reference) {
      auto res = table.find(k);
      if (!res.ref.has_value()) {
        FAIL("seed ", seed, " op ", op, ": stored key ", k, " not found");
      }
    }
  }
}

}  // namespace

TEST_CASE("all variants agree with the reference map on membership") {
  using T = Table<std::uint64_t, std::uint64_t, ModHash>;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    membership_matches_reference(
        seed, [](T& t, std::uint64_t k) { return t.remove(k); }, false, false);
    membership_matches_reference(
        seed, [](T& t, std::uint64_t k) { return remove_naive(t, k); }, true, false);
    membership_matches_reference(
        seed, [](T& t, std::uint64_t k) { return remove_shift(t, k); }, false, true);
  }
}

TEST_CASE("naive churn eventually leaves unjustified tombstones") {
  const std::size_t m = 32;
  Table<std::uint64_t, std::uint64_t, ModHash> table(m, ModHash{m});
  std::mt19937_64 gen(99);
  std::vector<std::uint64_t> alive;
  std::uint64_t next_key = 0;
  for (int i = 0; i < 16; ++i) {
    table.insert(next_key, 0);
    alive.push_back(next_key++);
  }

  bool found_unjustified = false;
  for (int round = 0; round < 200 && !found_unjustified; ++round) {
    const std::size_t idx = gen() % alive.size();
    remove_naive(table, alive[idx]);
    alive[idx] = alive.back();
    alive.pop_back();
    try {
      table.insert(next_key, 0);
      alive.push_back(next_key++);
    } catch (const TableFullError&) {
      break;
    }
    for (const auto& v : check_invariants(table)) {
      if (v.kind == ViolationKind::UnjustifiedTombstone) found_unjustified = true;
    }
  }
  CHECK(found_unjustified);
}
