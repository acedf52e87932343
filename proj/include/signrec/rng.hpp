#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace signrec {

// Deterministic random source. Wraps mt19937_64 but maps raw draws to
// ranges by hand: the std distributions are not guaranteed to produce
// identical streams across standard library implementations, and run
// reproducibility is part of the tool's contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n). Rejection sampling keeps the mapping unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  // Derives an independent stream, e.g. one per fold or per epoch.
  // seed_seq consumes 32-bit words, so both inputs are split to keep
  // every bit significant.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t out[4];
    seq.generate(out, out + 4);
    const std::uint64_t lo = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    const std::uint64_t hi = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    return Rng(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
  }

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates with the portable integer mapping above.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace signrec
