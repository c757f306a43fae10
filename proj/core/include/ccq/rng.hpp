#pragma once

#include <cstdint>
#include <vector>

namespace ccq {

// splitmix64: the one fixed-point of all our randomness. Every random decision
// in the library is a pure function of a 64-bit seed so that runs are
// reproducible across platforms and independent of evaluation order.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Order-independent hash of an unordered vertex pair under a seed. Used for
// per-pair coin flips (planted noise, faulty oracle) so the flip outcome does
// not depend on when, or in what order, a pair is examined.
inline uint64_t pair_hash(uint64_t seed, int u, int v) {
    if (u > v) { int t = u; u = v; v = t; }
    uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(u)) << 32) |
                   static_cast<uint64_t>(static_cast<uint32_t>(v));
    return splitmix64(seed ^ splitmix64(key));
}

// True with probability p, deterministically in (seed, u, v).
inline bool pair_coin(uint64_t seed, int u, int v, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    // top 53 bits -> uniform double in [0,1)
    double x = static_cast<double>(pair_hash(seed, u, v) >> 11) * 0x1.0p-53;
    return x < p;
}

// Small sequential generator for sampling and shuffles.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x5bf03635a1ce3e0dULL)) {}

    uint64_t next_u64() {
        state_ = splitmix64(state_);
        return state_;
    }

    // Uniform in [0, bound), bound > 0. Rejection-free modulo bias is fine at
    // our scales but we debias anyway.
    uint64_t next_below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    int next_int(int bound) { return static_cast<int>(next_below(static_cast<uint64_t>(bound))); }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    uint64_t state_;
};

} // namespace ccq
