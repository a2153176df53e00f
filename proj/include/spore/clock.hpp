#pragma once

#include <cstdint>

namespace spore {

/// Fine-grid step index. Every component observes the same tick.
using Tick = std::int64_t;

/// Dual time grid: fine steps of `fine_dt` seconds, coarse steps every
/// `coarse_every` fine steps.
struct SimClock {
    Tick tick = 0;
    double fine_dt = 1e-3;
    Tick coarse_every = 100;

    double coarse_dt() const { return fine_dt * static_cast<double>(coarse_every); }
    double seconds() const { return fine_dt * static_cast<double>(tick); }
    bool at_coarse_boundary() const { return tick > 0 && tick % coarse_every == 0; }
};

/// Number of `step` intervals in `duration`. Throws std::invalid_argument if
/// `duration` is not an integer multiple of `step` (relative slack 1e-9).
Tick whole_steps(double duration, double step);

/// True when `duration` is an integer multiple of `step`.
bool is_multiple(double duration, double step);

}  // namespace spore
