#pragma once

#include <cstdint>
#include <random>

namespace coassist {

// Explicit random source threaded through every stochastic operation.
// Draws are defined on top of the raw mt19937_64 output so sequences are
// identical across standard library implementations.
class SeedStream {
  public:
    explicit SeedStream(std::uint64_t seed = 0) : engine_(seed) {}

    // Independent stream for replicate/episode `index` of a run seeded with `seed`.
    static SeedStream derive(std::uint64_t seed, std::uint64_t index) {
        return SeedStream(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool operator==(const SeedStream& other) const { return engine_ == other.engine_; }

  private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

} // namespace coassist
