#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "stableprobe/workload.hpp"

namespace {

using namespace stableprobe;

struct BenchArgs {
  WorkloadConfig config;
  std::string out_path;
  bool rounds_given = false;
  bool measure_given = false;
};

int run_bench(BenchArgs& args) {
  WorkloadConfig& config = args.config;
  if (!args.rounds_given) config.rounds = 10 * config.target_elements();
  if (!args.measure_given)
    config.measure_every = std::max<std::uint64_t>(1, config.rounds / 20);
  config.validate();

  const WorkloadResult result = run_workload(config);
  if (args.out_path.empty()) {
    emit_csv(result.records, std::cout);
  } else {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open '" << args.out_path << "' for writing\n";
      return 1;
    }
    emit_csv(result.records, out);
  }
  if (result.saturated)
    std::cerr << "table saturated after " << result.records.back().deletions
              << " deletions; run stopped early\n";
  return 0;
}

int run_check(std::uint64_t seed, std::uint64_t ops, std::size_t m) {
  const CheckReport report = run_invariant_check(seed, ops, m);
  if (!report.ok) {
    std::cout << report.message << "\n";
    return 1;
  }
  std::cout << "check passed: " << report.ops_run << " ops, m=" << m
            << ", seed=" << seed << "\n";
  return 0;
}

int run_demo_lru(std::uint64_t seed, std::uint64_t ops, std::size_t capacity) {
  const LruTraceReport report = run_lru_trace(seed, ops, capacity);
  if (!report.ok) {
    std::cout << report.message << "\n";
    return 1;
  }
  std::cout << "demo-lru passed: " << report.ops_run << " ops, capacity="
            << capacity << ", final size=" << report.final_size << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear-probing hash table with stable slots: churn benchmarks and checks"};
  app.require_subcommand(1);

  const std::map<std::string, DeletePolicy> policies{
      {"fifo", DeletePolicy::Fifo}, {"random", DeletePolicy::Random}};
  const std::map<std::string, Variant> variants{{"minimal", Variant::Minimal},
                                                {"naive", Variant::Naive},
                                                {"shift", Variant::Shift}};

  BenchArgs bench_args;
  auto* bench = app.add_subcommand(
      "bench", "run a churn workload and write probe-cost metrics as CSV");
  bench->add_option("--m", bench_args.config.capacity, "table capacity")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 31));
  bench->add_option("--alpha", bench_args.config.alpha, "target load factor in (0,1)")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
  bench->add_option("--policy", bench_args.config.policy, "victim selection")
      ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));
  bench->add_option("--rounds", bench_args.config.rounds,
                    "delete+insert rounds (default 10*n)");
  bench->add_option("--measure-every", bench_args.config.measure_every,
                    "rounds between measurements (default rounds/20)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_args.config.seed, "64-bit seed");
  bench->add_option("--variant", bench_args.config.variant, "deletion variant")
      ->transform(CLI::CheckedTransformer(variants, CLI::ignore_case));
  bench->add_option("--out", bench_args.out_path, "CSV destination (default stdout)");

  std::uint64_t check_seed = 1, check_ops = 100000;
  std::size_t check_m = 256;
  auto* check = app.add_subcommand(
      "check", "randomized oracle-equivalence and invariant sweep");
  check->add_option("--seed", check_seed, "64-bit seed");
  check->add_option("--ops", check_ops, "operations to run")->check(CLI::PositiveNumber);
  check->add_option("--m", check_m, "table capacity")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 31));

  std::uint64_t lru_seed = 1, lru_ops = 10000;
  std::size_t lru_capacity = 64;
  auto* demo = app.add_subcommand(
      "demo-lru", "exercise the slot-linked LRU cache against a reference");
  demo->add_option("--capacity", lru_capacity, "cache capacity")
      ->check(CLI::PositiveNumber);
  demo->add_option("--ops", lru_ops, "operations to run")->check(CLI::PositiveNumber);
  demo->add_option("--seed", lru_seed, "64-bit seed");

  try {
    app.parse(argc, argv);
    bench_args.rounds_given = bench->count("--rounds") > 0;
    bench_args.measure_given = bench->count("--measure-every") > 0;

    if (bench->parsed()) return run_bench(bench_args);
    if (check->parsed()) return run_check(check_seed, check_ops, check_m);
    if (demo->parsed()) return run_demo_lru(lru_seed, lru_ops, lru_capacity);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
