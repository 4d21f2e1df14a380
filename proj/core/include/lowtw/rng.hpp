#pragma once

#include <cstdint>
#include <limits>

namespace lowtw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based generator. split(tag) derives an independent stream, so a
// recursion that splits by subcall index draws the same values in any schedule.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : key_(splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64(key_ ^ splitmix64(counter_++)); }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do x = (*this)();
    while (x >= limit);
    return x % bound;
  }

  Rng split(std::uint64_t tag) const {
    Rng r;
    r.key_ = splitmix64(key_ + splitmix64(tag ^ 0x3c6ef372fe94f82bULL));
    return r;
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace lowtw
