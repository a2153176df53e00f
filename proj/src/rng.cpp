#include "spore/rng.hpp"
#include "spore/clock.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spore {

Tick whole_steps(double duration, double step)
{
    if (!(step > 0.0))
        throw std::invalid_argument("step must be positive");
    const double ratio = duration / step;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio)))
        throw std::invalid_argument("duration is not a multiple of the step");
    return static_cast<Tick>(rounded);
}

bool is_multiple(double duration, double step)
{
    if (!(step > 0.0))
        return false;
    const double ratio = duration / step;
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, std::abs(ratio));
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis)
{
    std::uint64_t hash = basis;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x00000100000001b3ull;
    }
    return hash;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::derive(std::uint64_t seed, std::string_view stream)
{
    return Rng(splitmix64(seed) ^ fnv1a64(stream));
}

double Rng::normal()
{
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint32_t Rng::poisson(double mean)
{
    if (!(mean > 0.0))
        return 0;
    if (mean < 30.0) {
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::uint32_t k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }
    // Hoermann's transformed rejection with squeeze (PTRS).
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr)
            return static_cast<std::uint32_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b)
            <= -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::uint32_t>(k);
    }
}

std::string Rng::save() const
{
    std::ostringstream out;
    out << engine_;
    return out.str();
}

void Rng::restore(std::string_view state)
{
    std::istringstream in{std::string(state)};
    in >> engine_;
    if (!in)
        throw std::runtime_error("corrupt random-stream state");
}

}  // namespace spore
