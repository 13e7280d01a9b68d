#pragma once

#include "wsc/common.hpp"

namespace wsc {

// splitmix64: cheap, well-mixed seeding primitive
inline u64 splitmix64(u64& state) {
    u64 z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++, seeded via splitmix64. Value-type so sampling blocks can own
// independent streams; estimates must not depend on how work is partitioned.
class Rng {
  public:
    explicit Rng(u64 seed) {
        u64 s = seed;
        for (auto& w : s_) w = splitmix64(s);
    }

    u64 next_u64() {
        const u64 result = rotl(s_[0] + s_[3], 23) + s_[0];
        const u64 t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0, n)
    u64 next_below(u64 n) { return next_u64() % n; }

  private:
    static u64 rotl(u64 x, int k) { return (x << k) | (x >> (64 - k)); }
    u64 s_[4];
};

// Deterministic per-block stream: identical results for any thread layout.
inline Rng block_rng(u64 master_seed, u64 block_index) {
    u64 s = master_seed ^ (0xd1342543de82ef95ULL * (block_index + 1));
    splitmix64(s);
    return Rng(s);
}

}  // namespace wsc
