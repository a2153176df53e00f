#include "spore/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spore::snn {

DeliveryQueue::DeliveryQueue(std::size_t neurons, std::uint32_t max_delay)
    : neurons_(neurons), max_delay_(max_delay), slots_((max_delay + 1) * neurons, 0.0)
{
    if (max_delay == 0)
        throw std::invalid_argument("delivery queue needs max_delay >= 1");
}

void DeliveryQueue::schedule(std::uint32_t target, std::uint32_t delay, double amplitude)
{
    const std::size_t slot = (head_ + delay) % (max_delay_ + 1);
    slots_[slot * neurons_ + target] += amplitude;
}

std::span<const double> DeliveryQueue::arriving() const
{
    return {slots_.data() + head_ * neurons_, neurons_};
}

void DeliveryQueue::advance()
{
    std::fill_n(slots_.begin() + static_cast<std::ptrdiff_t>(head_ * neurons_), neurons_, 0.0);
    head_ = (head_ + 1) % (max_delay_ + 1);
}

StaticWiring::StaticWiring(std::span<const StaticSynapse> synapses, std::size_t neurons)
    : synapses_(synapses.begin(), synapses.end()), begin_(neurons + 1, 0)
{
    for (const auto& s : synapses_) {
        if (s.source >= neurons || s.target >= neurons)
            throw std::invalid_argument("static synapse refers to an unknown neuron");
        if (s.delay == 0)
            throw std::invalid_argument("static synapse delay must be at least one tick");
        max_delay_ = std::max(max_delay_, s.delay);
    }
    std::stable_sort(synapses_.begin(), synapses_.end(),
                     [](const StaticSynapse& a, const StaticSynapse& b) { return a.source < b.source; });
    for (const auto& s : synapses_)
        ++begin_[s.source + 1];
    for (std::size_t i = 1; i < begin_.size(); ++i)
        begin_[i] += begin_[i - 1];
}

std::span<const StaticSynapse> StaticWiring::outgoing(std::uint32_t source) const
{
    if (source + 1 >= begin_.size())
        return {};
    return {synapses_.data() + begin_[source], begin_[source + 1] - begin_[source]};
}

namespace {

template <typename Emit>
void fan_out(std::span<const SpikeEvent> events, const StaticWiring& statics,
             const plasticity::SynapseTable& plastic, Emit&& emit)
{
    const auto targets = plastic.targets();
    const auto weights = plastic.weights();
    for (const auto& ev : events) {
        const double count = static_cast<double>(ev.count);
        for (const auto& s : statics.outgoing(ev.neuron_id))
            emit(s.target, s.delay, s.weight * count);
        const auto slot = plastic.source_slot(ev.neuron_id);
        if (slot < 0)
            continue;
        const auto [begin, end] = plastic.range_of_source(static_cast<std::size_t>(slot));
        for (std::size_t i = begin; i < end; ++i)
            emit(targets[i], plastic.delay(), weights[i] * count);
    }
}

}  // namespace

std::size_t propagate_spikes(std::span<const SpikeEvent> events, const StaticWiring& statics,
                             const plasticity::SynapseTable& plastic, DeliveryQueue& queue)
{
    std::size_t n = 0;
    fan_out(events, statics, plastic, [&](std::uint32_t target, std::uint32_t delay, double amp) {
        queue.schedule(target, delay, amp);
        ++n;
    });
    return n;
}

std::vector<PspDelivery> list_deliveries(std::span<const SpikeEvent> events,
                                         const StaticWiring& statics,
                                         const plasticity::SynapseTable& plastic)
{
    std::vector<PspDelivery> out;
    Tick tick = events.empty() ? 0 : events.front().tick;
    fan_out(events, statics, plastic, [&](std::uint32_t target, std::uint32_t delay, double amp) {
        out.push_back({target, tick + delay, amp});
    });
    return out;
}

Network::Network(NeuronTable neurons, std::span<const StaticSynapse> statics,
                 plasticity::SynapseTable plastic, const NeuronParams& params, double dt)
    : neurons_(std::move(neurons)),
      statics_(statics, neurons_.size()),
      plastic_(std::move(plastic)),
      dyn_(params, dt)
{
    const std::size_t n = neurons_.size();
    if (neurons_.poisson_rate.size() != n)
        neurons_.poisson_rate.resize(n, 0.0);
    if (neurons_.bias.size() != n)
        neurons_.bias.resize(n, 0.0);
    for (auto t : plastic_.targets())
        if (t >= n)
            throw std::invalid_argument("plastic synapse refers to an unknown neuron");
    for (auto s : plastic_.sources())
        if (s >= n)
            throw std::invalid_argument("plastic synapse refers to an unknown neuron");
    poisson_prob_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        poisson_prob_[i] = -std::expm1(-neurons_.poisson_rate[i] * dt);
    states_.assign(n, NeuronState{});
    queue_ = DeliveryQueue(n, std::max(statics_.max_delay(), plastic_.empty() ? 1u : plastic_.delay()));
    injected_.assign(n, 0);
    counts_.assign(n, 0);
    intensity_.assign(n, 0.0);
}

void Network::inject(std::uint32_t neuron, std::uint32_t count)
{
    if (neuron >= size())
        throw std::out_of_range("inject: unknown neuron");
    injected_[neuron] += count;
}

void Network::step_neurons(Tick tick, Rng& rng)
{
    const auto arriving = queue_.arriving();
    events_.clear();
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t count = 0;
        auto& st = states_[i];
        switch (neurons_.kinds[i]) {
        case NeuronKind::Source:
            count = injected_[i];
            injected_[i] = 0;
            st.intensity = 0.0;
            break;
        case NeuronKind::PoissonSource:
            count = rng.uniform() < poisson_prob_[i] ? 1u : 0u;
            st.intensity = poisson_prob_[i] / dyn_.dt();
            break;
        case NeuronKind::Stochastic:
            count = step_neuron(st, arriving[i], dyn_, rng, tick, neurons_.bias[i]) ? 1u : 0u;
            break;
        }
        if (count > 0) {
            st.last_spike_tick = tick;
            events_.push_back({static_cast<std::uint32_t>(i), tick, count});
        }
        counts_[i] = count;
        intensity_[i] = st.intensity;
    }
}

void Network::propagate(Tick)
{
    propagate_spikes(events_, statics_, plastic_, queue_);
    queue_.advance();
}

}  // namespace spore::snn
