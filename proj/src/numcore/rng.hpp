#pragma once

#include <cstdint>
#include <vector>

namespace kplug::numcore {

// Deterministic splittable generator built on SplitMix64. The uint64 stream
// and everything derived from it by pure arithmetic (uniform, uniform_int,
// bernoulli, shuffle) is reproducible bit-for-bit across runs and platforms;
// normal() additionally goes through libm (log/cos) and is reproducible on
// any fixed platform. Streams for sub-tasks are derived with fork(), which
// never disturbs the parent stream.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1]
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased enough for desk-scale n: multiply-shift on the top 64 bits.
    uint64_t uniform_int(uint64_t n);

    double normal(); // Box-Muller, one value per call

    bool bernoulli(double p) { return uniform() < p; }

    // Independent child stream; `key` distinguishes siblings.
    Rng fork(uint64_t key) const { return Rng(mix(state_ ^ mix(key + 0x632be59bd9b4e019ull))); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), order randomized
    std::vector<size_t> sample_indices(size_t n, size_t k);

  private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    uint64_t state_;
};

} // namespace kplug::numcore
