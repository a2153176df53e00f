#include "spore/psp_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace spore::snn {

PspKernel::PspKernel(double tau_rise, double tau_fall) : tau_rise_(tau_rise), tau_fall_(tau_fall)
{
    if (!(tau_rise > 0.0) || !(tau_rise < tau_fall))
        throw std::invalid_argument("PSP kernel requires 0 < tau_rise < tau_fall");
    peak_time_ = tau_rise * tau_fall / (tau_fall - tau_rise) * std::log(tau_fall / tau_rise);
    norm_ = std::exp(-peak_time_ / tau_fall) - std::exp(-peak_time_ / tau_rise);
}

double PspKernel::operator()(double elapsed) const
{
    if (!(elapsed > 0.0))
        return 0.0;
    return (std::exp(-elapsed / tau_fall_) - std::exp(-elapsed / tau_rise_)) / norm_;
}

FilterDecay FilterDecay::for_step(const PspKernel& kernel, double dt)
{
    return {std::exp(-dt / kernel.tau_rise()), std::exp(-dt / kernel.tau_fall()),
            1.0 / kernel.normalization()};
}

}  // namespace spore::snn
