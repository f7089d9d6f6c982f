#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Seeded randomness with a bit-exact cross-platform contract.
//
// The engine is std::mt19937_64, whose output sequence for a given seed is
// fixed by the language standard. The standard library's *distributions* are
// not (their algorithms are implementation-defined), so every distribution
// here is hand-rolled with a documented draw order. Tests and file outputs
// depend on these exact sequences; do not change them.

namespace comds::rng {

// splitmix64 finalizer step. Good avalanche, cheap, stateless.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Derives the seed of logical substream `id` from a user seed. Substreams let
// generators draw for independent purposes (clusters, coordinates, permutation
// replicates) without their call interleaving affecting each other.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t id) {
    return mix64(seed + mix64(id));
}

class Generator {
  public:
    explicit Generator(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform on (0, 1]: top 53 bits of one raw draw, shifted off zero.
    // Never returns 0, so log() is always safe.
    double uniform01() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Standard normal, Box-Muller cosine branch. Consumes exactly two raw
    // draws per call and keeps no cached state, so the stream position after
    // k calls is always 2k.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        constexpr double two_pi = 6.28318530717958647692;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Index in [0, n). Plain modulo of one raw draw: the bias is below 2^-50
    // for the n used anywhere here (n < 2^13), far under statistical noise,
    // and the result is portable.
    std::uint64_t index(std::uint64_t n) { return engine_() % n; }

  private:
    std::mt19937_64 engine_;
};

// Fisher-Yates with Generator::index; std::shuffle is not portable.
template <class T>
void shuffle(std::vector<T>& v, Generator& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[g.index(i)]);
    }
}

}  // namespace comds::rng
