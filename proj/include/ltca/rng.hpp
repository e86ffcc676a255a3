#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace ltca {

/// SplitMix64: the generator behind every randomized fixture in this
/// project. Counter-based and splittable, so any (seed, stream) pair names
/// the same sequence on every platform; fixture manifests record
/// "splitmix64" as the generator identity.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Stream derivation: mixes the stream index through one SplitMix64
    /// step before seeding, so (seed, k) and (seed, k+1) are uncorrelated.
    static SplitMix64 split(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 mixer(seed);
        std::uint64_t base = mixer.next_u64();
        return SplitMix64(base ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double next_gauss() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::uint64_t state_;
};

/// First r entries of a Fisher-Yates shuffle of {0, .., n-1}: r distinct
/// values, order-sensitive to the generator state.
inline std::vector<std::uint64_t> sample_distinct(SplitMix64& rng, std::uint64_t n,
                                                  std::uint64_t r) {
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint64_t i = 0; i < r; ++i) {
        std::uint64_t j = i + rng.next_below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(r);
    return pool;
}

}  // namespace ltca
