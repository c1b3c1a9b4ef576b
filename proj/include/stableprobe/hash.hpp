#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace stableprobe {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

// uniform draw from [0, n) via 128-bit multiply; bias is < n / 2^64
inline std::uint64_t bounded(std::uint64_t word, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(word) * n) >> 64);
}

}  // namespace detail

/// Hash provider for benchmark tables: each key's position is an
/// independent draw from a seeded Mersenne Twister, uniform over
/// [0, range) and a pure function of (seed, key, range). Values are cached
/// on first use — densely for small keys (the workloads use a monotone key
/// counter), in a map otherwise. Copies share the cache; instances follow
/// the table's single-owner threading contract.
class TabulatedHash {
 public:
  TabulatedHash(std::uint64_t seed, std::size_t range)
      : seed_(seed), range_(range), cache_(std::make_shared<Cache>()) {
    if (range == 0 || range > (std::size_t{1} << 31))
      throw std::invalid_argument("hash range must be in [1, 2^31]");
  }

  std::size_t operator()(std::uint64_t key) const {
    if (key < kDenseLimit) {
      auto& dense = cache_->dense;
      if (key >= dense.size()) {
        std::size_t grown = dense.empty() ? 1024 : dense.size();
        while (grown <= key) grown *= 2;
        dense.resize(grown, kUnset);
      }
      std::uint32_t& slot = dense[key];
      if (slot == kUnset) slot = static_cast<std::uint32_t>(value_for(key));
      return slot;
    }
    auto [it, inserted] = cache_->sparse.try_emplace(key, 0);
    if (inserted) it->second = static_cast<std::uint32_t>(value_for(key));
    return it->second;
  }

  std::uint64_t seed() const { return seed_; }
  std::size_t range() const { return range_; }

 private:
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24;
  static constexpr std::uint32_t kUnset = 0xffffffffu;

  std::size_t value_for(std::uint64_t key) const {
    std::mt19937_64 gen(detail::mix_seed(seed_, key));
    return detail::bounded(gen(), range_);
  }

  struct Cache {
    std::vector<std::uint32_t> dense;
    std::unordered_map<std::uint64_t, std::uint32_t> sparse;
  };

  std::uint64_t seed_;
  std::size_t range_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace stableprobe
