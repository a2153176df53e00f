#include "spore/decoding.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spore::motor {

void update_activity(ActivityTrace& trace, std::span<const std::uint32_t> spikes, double dt)
{
    if (spikes.size() != trace.a.size())
        throw std::invalid_argument("spike vector does not match activity trace");
    const double decay = std::exp(-dt / trace.tau);
    for (std::size_t k = 0; k < trace.a.size(); ++k)
        trace.a[k] = trace.a[k] * decay + static_cast<double>(spikes[k]);
}

Velocity decode_velocity(std::span<const double> activity, double gain)
{
    const double n = static_cast<double>(activity.size());
    Velocity v;
    for (std::size_t i = 0; i < activity.size(); ++i) {
        const double beta = 2.0 * static_cast<double>(i + 1) * std::numbers::pi / n;
        v.vx += activity[i] * std::cos(beta);
        v.vy += activity[i] * std::sin(beta);
    }
    v.vx *= gain;
    v.vy *= gain;
    return v;
}

double steering_command(double s)
{
    if (s <= -10.0)
        return -30.0;
    if (s <= -2.5)
        return -15.0;
    if (s < 2.5)
        return 0.0;
    if (s < 10.0)
        return 15.0;
    return 30.0;
}

Steering decode_steering(std::span<const double> activity, const SteeringDecoder& cfg)
{
    if (activity.size() < 2 || activity.size() % 2 != 0)
        throw std::invalid_argument("steering decoder needs two equal populations");
    const std::size_t half = activity.size() / 2;
    double a_left = 0.0;
    double a_right = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        a_left += activity[i];
        a_right += activity[half + i];
    }
    Steering out;
    const double total = a_left + a_right;
    if (total > cfg.activity_eps) {
        out.ratio = (a_left - a_right) / total;
    } else {
        out.silent = true;
    }
    out.scaled = cfg.scale * out.ratio;
    out.angle = steering_command(out.scaled);
    if (cfg.first_population_negative)
        out.angle = -out.angle;
    return out;
}

}  // namespace spore::motor
