#include "spore/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spore::snn {

double neuron_rate(double membrane, double rate_scale, double sensitivity, double rate_max)
{
    const double rate = rate_scale * std::exp(membrane / sensitivity);
    if (!(rate < rate_max))
        return rate_max;  // also absorbs overflow to +inf
    return rate;
}

NeuronDynamics::NeuronDynamics(const NeuronParams& params, double dt)
    : params_(params),
      dt_(dt),
      decay_(FilterDecay::for_step(PspKernel(params.tau_rise, params.tau_fall), dt)),
      refractory_ticks_(static_cast<Tick>(std::llround(params.refractory / dt)))
{
    if (!(params.rate_scale > 0.0) || !(params.sensitivity > 0.0) || !(params.rate_max > 0.0))
        throw std::invalid_argument("neuron rate parameters must be positive");
    if (params.refractory < 0.0)
        throw std::invalid_argument("refractory period must be non-negative");
}

bool step_neuron(NeuronState& state, double incoming_psp_sum, const NeuronDynamics& dyn, Rng& rng,
                 Tick tick, double bias)
{
    const auto& p = dyn.params();
    state.psp.decay(dyn.decay());
    if (incoming_psp_sum != 0.0)
        state.psp.add(incoming_psp_sum);
    state.membrane = state.psp.value(dyn.decay()) + bias;
    state.rate = neuron_rate(state.membrane, p.rate_scale, p.sensitivity, p.rate_max);

    if (state.last_spike_tick && tick - *state.last_spike_tick < dyn.refractory_ticks()) {
        state.intensity = 0.0;
        return false;
    }
    const double prob = -std::expm1(-state.rate * dyn.dt());
    state.intensity = prob / dyn.dt();
    if (rng.uniform() < prob) {
        state.last_spike_tick = tick;
        return true;
    }
    return false;
}

}  // namespace spore::snn
