#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace spore::motor {

/// Low-pass filtered spike activity of each motor neuron.
struct ActivityTrace {
    std::vector<double> a;
    double tau = 0.1;  // s

    ActivityTrace() = default;
    ActivityTrace(std::size_t neurons, double tau_s) : a(neurons, 0.0), tau(tau_s) {}
};

/// a <- a exp(-dt / tau) + spikes.
void update_activity(ActivityTrace& trace, std::span<const std::uint32_t> spikes, double dt);

struct Velocity {
    double vx = 0.0;
    double vy = 0.0;
};

/// gain * sum_k a_k (cos b_k, sin b_k) with b_k = 2 k pi / N, k = 1..N.
Velocity decode_velocity(std::span<const double> activity, double gain);

/// The five discrete steering commands, degrees.
inline constexpr std::array<double, 5> kSteeringCommands{-30.0, -15.0, 0.0, 15.0, 30.0};

struct SteeringDecoder {
    double scale = 20.0;
    double activity_eps = 1e-6;
    /// When set, a dominant first population yields negative angles.
    bool first_population_negative = false;
};

struct Steering {
    double ratio = 0.0;  // (aL - aR) / (aL + aR)
    double scaled = 0.0; // scale * ratio
    double angle = 0.0;  // deg
    bool silent = false; // both populations below activity_eps
};

/// Maps s to {-30, -15, 0, 15, 30} with boundaries {-10, -2.5, 2.5, 10}.
double steering_command(double scaled);

/// Ratio decoder over two equal halves of `activity`.
Steering decode_steering(std::span<const double> activity, const SteeringDecoder& cfg);

}  // namespace spore::motor
