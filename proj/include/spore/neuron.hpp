#pragma once

#include "spore/clock.hpp"
#include "spore/psp_kernel.hpp"
#include "spore/rng.hpp"

#include <optional>

namespace spore::snn {

/// Stochastic point neuron with exponential escape noise.
struct NeuronParams {
    double rate_scale = 10.0;   // Hz at zero membrane
    double sensitivity = 62.0;  // membrane units per e-fold of rate
    double rate_max = 1000.0;   // Hz
    double refractory = 2e-3;   // s
    double tau_rise = 2e-3;     // s
    double tau_fall = 20e-3;    // s
};

/// rate_scale * exp(membrane / sensitivity), clamped to [0, rate_max].
double neuron_rate(double membrane, double rate_scale, double sensitivity, double rate_max);

struct NeuronState {
    double membrane = 0.0;
    double rate = 0.0;
    /// Spike probability of the current tick divided by dt; zero while
    /// refractory. This is the conditional intensity seen by plasticity.
    double intensity = 0.0;
    std::optional<Tick> last_spike_tick;
    KernelFilter psp;
};

/// NeuronParams bound to a step size.
class NeuronDynamics {
public:
    NeuronDynamics(const NeuronParams& params, double dt);

    const NeuronParams& params() const { return params_; }
    double dt() const { return dt_; }
    const FilterDecay& decay() const { return decay_; }
    Tick refractory_ticks() const { return refractory_ticks_; }

private:
    NeuronParams params_;
    double dt_;
    FilterDecay decay_;
    Tick refractory_ticks_;
};

/// One fine step: decay the PSP state, add `incoming_psp_sum` arriving this
/// tick, recompute membrane (PSP sum plus constant `bias`) and rate, then draw a spike with probability
/// 1 - exp(-rate * dt). A neuron that spiked at tick s cannot spike again
/// before tick s + refractory_ticks. Returns whether it spiked at `tick`.
bool step_neuron(NeuronState& state, double incoming_psp_sum, const NeuronDynamics& dyn, Rng& rng,
                 Tick tick, double bias = 0.0);

}  // namespace spore::snn
