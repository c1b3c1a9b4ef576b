// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. Expect a few minutes:
// the convergence and size-independence runs drive million-slot tables
// through tens of millions of operations.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "stableprobe/baselines.hpp"
#include "stableprobe/oracle.hpp"
#include "stableprobe/workload.hpp"

using namespace stableprobe;

namespace {

int failures = 0;

void report(int criterion, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", criterion, title,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

WorkloadConfig base_config(std::size_t m, double alpha, DeletePolicy policy,
                           Variant variant, std::uint64_t seed) {
  WorkloadConfig config;
  config.capacity = m;
  config.alpha = alpha;
  config.policy = policy;
  config.variant = variant;
  config.seed = seed;
  return config;
}

// ---- criteria 1 & 2: randomized oracle equivalence, minimality, handles ----

void criteria_1_and_2() {
  bool ok = true;
  std::string detail;
  std::uint64_t total_ops = 0;
  for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
    const CheckReport report = run_invariant_check(seed, 100000, 256);
    total_ops += report.ops_run;
    if (!report.ok) {
      ok = false;
      detail = "seed " + std::to_string(seed) + ": " + report.message;
    }
  }
  if (ok)
    detail = "20 seeds x 100000 mixed ops on m=256: invariants clean, map and "
             "handles agreed after every op";
  report(1, "oracle equivalence & inductive minimality", ok, detail);

  const std::uint64_t moved = count_moved_elements(1, 400, 256);
  report(2, "referential integrity with shift-deletion negative control", ok && moved > 0,
         ok ? "zero handle violations in criterion 1; shift control moved " +
                  std::to_string(moved) + " element(s)"
            : "criterion 1 runs failed");
}

// ---- criterion 3: convergence anchor at alpha=0.8 ----

void criterion_3() {
  auto config = base_config(1000000, 0.8, DeletePolicy::Fifo, Variant::Minimal, 42);
  config.rounds = 10 * static_cast<std::uint64_t>(config.target_elements());
  config.measure_every = config.target_elements() / 2;

  const auto result = run_workload(config);
  const auto& records = result.records;
  const double final_cost = records.back().avg_unsuccessful;
  const double previous = records[records.size() - 2].avg_unsuccessful;
  const double drift = rel_diff(final_cost, previous);

  const bool in_band = final_cost >= 160.0 && final_cost <= 260.0;
  const bool settled = drift < 0.05;
  report(3, "unsuccessful-search cost converges near 210 at alpha=0.8",
         in_band && settled && !result.saturated,
         "final=" + fmt(final_cost) + " (band [160,260]), last-two drift=" +
             fmt(100.0 * drift) + "% (<5%)");
}

// ---- criterion 4: bounded steady state + naive contrast ----

void criterion_4() {
  auto config = base_config(100000, 0.5, DeletePolicy::Fifo, Variant::Minimal, 7);
  const std::uint64_t n = config.target_elements();
  config.rounds = 10 * n;
  config.measure_every = n;  // records at 0, n, 2n, ..., 10n deletions

  const auto minimal = run_workload(config);
  const auto& records = minimal.records;
  const MetricsRecord* at_5n = nullptr;
  const MetricsRecord* at_10n = nullptr;
  for (const auto& r : records) {
    if (r.deletions == 5 * n) at_5n = &r;
    if (r.deletions == 10 * n) at_10n = &r;
  }
  bool ok = at_5n && at_10n && !minimal.saturated;
  std::string detail;
  if (ok) {
    const double drift_s = rel_diff(at_10n->avg_successful, at_5n->avg_successful);
    const double drift_u = rel_diff(at_10n->avg_unsuccessful, at_5n->avg_unsuccessful);
    ok = drift_s < 0.05 && drift_u < 0.05;
    detail = "minimal drift 5n->10n: successful " + fmt(100.0 * drift_s) +
             "%, unsuccessful " + fmt(100.0 * drift_u) + "% (<5%)";
  } else {
    detail = "measurement points missing or run saturated";
  }

  config.variant = Variant::Naive;
  const auto naive = run_workload(config);
  const double naive_final = naive.records.back().avg_unsuccessful;
  const bool diverged =
      naive.saturated || (at_10n && naive_final > 10.0 * at_10n->avg_unsuccessful);
  detail += naive.saturated
                ? "; naive saturated after " +
                      std::to_string(naive.records.back().deletions) + " deletions"
                : "; naive/minimal unsuccessful ratio " +
                      fmt(at_10n ? naive_final / at_10n->avg_unsuccessful : 0.0) +
                      " (>10)";
  report(4, "bounded steady state with diverging naive baseline", ok && diverged, detail);
}

// ---- criterion 5: size independence at alpha=0.5 ----

void criterion_5() {
  const std::vector<std::size_t> sizes{10000, 100000, 1000000};
  std::vector<double> successful, unsuccessful;
  for (const std::size_t m : sizes) {
    auto config = base_config(m, 0.5, DeletePolicy::Fifo, Variant::Minimal, 11);
    config.rounds = 10 * static_cast<std::uint64_t>(config.target_elements());
    config.measure_every = config.target_elements();
    const auto result = run_workload(config);
    successful.push_back(result.records.back().avg_successful);
    unsuccessful.push_back(result.records.back().avg_unsuccessful);
  }
  auto spread_ok = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi <= 1.10 * *lo;
  };
  const bool ok = spread_ok(successful) && spread_ok(unsuccessful);
  report(5, "converged costs are independent of table size", ok,
         "successful {" + fmt(successful[0]) + ", " + fmt(successful[1]) + ", " +
             fmt(successful[2]) + "}, unsuccessful {" + fmt(unsuccessful[0]) + ", " +
             fmt(unsuccessful[1]) + ", " + fmt(unsuccessful[2]) +
             "}; pairwise within 10%");
}

// ---- criterion 6: random-deletion contrast ----

void criterion_6() {
  auto config = base_config(100000, 0.5, DeletePolicy::Fifo, Variant::Minimal, 19);
  config.rounds = 10 * static_cast<std::uint64_t>(config.target_elements());
  config.measure_every = config.target_elements();
  const auto fifo = run_workload(config);

  config.policy = DeletePolicy::Random;
  const auto random_run = run_workload(config);

  const auto& f = fifo.records.back();
  const auto& r = random_run.records.back();
  const bool ok = r.avg_successful < f.avg_successful &&
                  r.avg_unsuccessful >= 0.95 * f.avg_unsuccessful;
  report(6, "random deletion: cheaper successful, no cheaper unsuccessful search", ok,
         "successful random " + fmt(r.avg_successful) + " < fifo " +
             fmt(f.avg_successful) + "; unsuccessful random " +
             fmt(r.avg_unsuccessful) + " >= 0.95*fifo (" +
             fmt(0.95 * f.avg_unsuccessful) + ")");
}

// ---- criterion 7: fresh-fill sanity ----

void criterion_7() {
  auto config = base_config(1000000, 0.5, DeletePolicy::Fifo, Variant::Minimal, 23);
  config.rounds = 0;

  const auto result = run_workload(config);
  const auto& record = result.records.front();
  const bool ok = rel_diff(record.avg_successful, 1.5) < 0.05 &&
                  rel_diff(record.avg_unsuccessful, 2.5) < 0.05;
  report(7, "fresh fill at alpha=0.5 shows classical probe costs", ok,
         "successful " + fmt(record.avg_successful) + " (1.5±5%), unsuccessful " +
             fmt(record.avg_unsuccessful) + " (2.5±5%)");
}

// ---- criterion 8: exact metric values on the known layout ----

void criterion_8() {
  struct FixedHash {
    std::size_t operator()(std::uint64_t key) const {
      switch (key) {
        case 1: return 2;
        case 2: return 2;
        case 3: return 3;
      }
      return static_cast<std::size_t>(key % 8);
    }
  };
  Table<std::uint64_t, std::uint64_t, FixedHash> table(8, FixedHash{});
  table.insert(1, 0);
  table.insert(2, 0);
  table.insert(3, 0);

  const auto costs = exact_probe_costs(table);
  const bool ok = costs.successful && *costs.successful == 5.0 / 3.0 &&
                  costs.unsuccessful && *costs.unsuccessful == 1.75;
  report(8, "exact probe-cost unit values reproduced", ok,
         "successful=" + fmt(costs.successful.value_or(-1)) +
             " (expect 5/3), unsuccessful=" + fmt(costs.unsuccessful.value_or(-1)) +
             " (expect 1.75)");
}

// ---- criterion 9: LRU trace equivalence ----

void criterion_9() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10 && ok; ++seed) {
    const auto report = run_lru_trace(seed, 10000, 64);
    if (!report.ok) {
      ok = false;
      detail = "seed " + std::to_string(seed) + ": " + report.message;
    }
  }
  if (ok)
    detail = "10 seeds x 10000 ops, capacity 64: contents, order and links "
             "matched the reference after every op";
  report(9, "slot-linked LRU cache equals the reference implementation", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto wanted = [&](int c) { return selected.empty() || selected.count(c) > 0; };

  if (wanted(1) || wanted(2)) criteria_1_and_2();
  if (wanted(3)) criterion_3();
  if (wanted(4)) criterion_4();
  if (wanted(5)) criterion_5();
  if (wanted(6)) criterion_6();
  if (wanted(7)) criterion_7();
  if (wanted(8)) criterion_8();
  if (wanted(9)) criterion_9();

  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
