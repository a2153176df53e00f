#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace spore {

/// Seeded random stream with a serializable state.
///
/// Distributions are implemented here instead of with <random> adaptors so
/// the stream carries no hidden cached state: saving the engine is enough to
/// resume bit-identically.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);

    /// Independent stream for a named component, derived from a run seed.
    static Rng derive(std::uint64_t seed, std::string_view stream);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal by Box-Muller; consumes two draws, caches nothing.
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Poisson count. Inversion for small means, PTRS rejection otherwise.
    std::uint32_t poisson(double mean);

    bool bernoulli(double p) { return uniform() < p; }

    std::string save() const;
    void restore(std::string_view state);

    friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

private:
    std::mt19937_64 engine_;
};

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ull);

}  // namespace spore
