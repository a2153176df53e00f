#pragma once

#include "spore/clock.hpp"
#include "spore/neuron.hpp"
#include "spore/plasticity.hpp"
#include "spore/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spore::snn {

enum class NeuronKind : std::uint8_t {
    Source,         // emits exactly the spikes injected into it
    Stochastic,     // escape-noise point neuron
    PoissonSource,  // homogeneous Poisson generator
};

struct StaticSynapse {
    std::uint32_t source = 0;
    std::uint32_t target = 0;
    double weight = 0.0;     // negative is inhibitory
    std::uint32_t delay = 1; // ticks
};

struct SpikeEvent {
    std::uint32_t neuron_id = 0;
    Tick tick = 0;
    std::uint32_t count = 1;
};

struct PspDelivery {
    std::uint32_t target = 0;
    Tick tick = 0;
    double amplitude = 0.0;
};

/// Ring buffer of per-neuron PSP onsets for the next `max_delay` ticks.
class DeliveryQueue {
public:
    DeliveryQueue() = default;
    DeliveryQueue(std::size_t neurons, std::uint32_t max_delay);

    /// Schedule an onset `delay` ticks after the current tick.
    void schedule(std::uint32_t target, std::uint32_t delay, double amplitude);
    /// Amplitudes arriving at the current tick.
    std::span<const double> arriving() const;
    /// Clears the current slot and moves to the next tick.
    void advance();

    std::uint32_t max_delay() const { return max_delay_; }
    std::vector<double>& raw() { return slots_; }
    std::size_t& head() { return head_; }

private:
    std::size_t neurons_ = 0;
    std::uint32_t max_delay_ = 1;
    std::size_t head_ = 0;
    std::vector<double> slots_;
};

/// Static synapses grouped by source for fan-out.
class StaticWiring {
public:
    StaticWiring() = default;
    StaticWiring(std::span<const StaticSynapse> synapses, std::size_t neurons);

    std::span<const StaticSynapse> outgoing(std::uint32_t source) const;
    std::uint32_t max_delay() const { return max_delay_; }
    std::size_t size() const { return synapses_.size(); }

private:
    std::vector<StaticSynapse> synapses_;
    std::vector<std::size_t> begin_;
    std::uint32_t max_delay_ = 1;
};

/// Schedules weighted PSP onsets for this tick's spikes. Plastic synapses use
/// their current weight. Returns the number of deliveries scheduled.
std::size_t propagate_spikes(std::span<const SpikeEvent> events, const StaticWiring& statics,
                             const plasticity::SynapseTable& plastic, DeliveryQueue& queue);

/// Same fan-out, returned as an explicit delivery list (for inspection).
std::vector<PspDelivery> list_deliveries(std::span<const SpikeEvent> events,
                                         const StaticWiring& statics,
                                         const plasticity::SynapseTable& plastic);

/// Per-neuron description of a network.
struct NeuronTable {
    std::vector<NeuronKind> kinds;
    std::vector<double> poisson_rate;  // Hz, PoissonSource only
    std::vector<double> bias;          // membrane offset, Stochastic only
    std::size_t size() const { return kinds.size(); }
};

/// Fixed-step simulation of a network of point neurons. Plasticity is
/// applied by the caller between step_neurons() and propagate().
class Network {
public:
    Network(NeuronTable neurons, std::span<const StaticSynapse> statics,
            plasticity::SynapseTable plastic, const NeuronParams& params, double dt);

    std::size_t size() const { return neurons_.kinds.size(); }
    double dt() const { return dyn_.dt(); }

    /// Spikes to be emitted by a Source neuron at the next step.
    void inject(std::uint32_t neuron, std::uint32_t count);

    /// Neuron update for `tick`. Fills spike_counts() and intensities().
    void step_neurons(Tick tick, Rng& rng);
    /// Fan out the spikes of the last step_neurons() call and advance the
    /// delivery queue.
    void propagate(Tick tick);

    std::span<const std::uint32_t> spike_counts() const { return counts_; }
    std::span<const double> intensities() const { return intensity_; }
    std::span<const SpikeEvent> spikes() const { return events_; }

    plasticity::SynapseTable& plastic() { return plastic_; }
    const plasticity::SynapseTable& plastic() const { return plastic_; }
    const NeuronTable& neurons() const { return neurons_; }
    const StaticWiring& statics() const { return statics_; }

    std::vector<NeuronState>& states() { return states_; }
    const std::vector<NeuronState>& states() const { return states_; }
    DeliveryQueue& queue() { return queue_; }
    std::vector<std::uint32_t>& pending_injections() { return injected_; }

private:
    NeuronTable neurons_;
    StaticWiring statics_;
    plasticity::SynapseTable plastic_;
    NeuronDynamics dyn_;
    std::vector<double> poisson_prob_;
    std::vector<NeuronState> states_;
    DeliveryQueue queue_;
    std::vector<std::uint32_t> injected_;
    std::vector<std::uint32_t> counts_;
    std::vector<double> intensity_;
    std::vector<SpikeEvent> events_;
};

}  // namespace spore::snn
