#include "spore/plasticity.hpp"

#include <algorithm>
#include <stdexcept>

namespace spore::plasticity {

double map_weight(double theta, const PlasticityConfig& cfg)
{
    return map_weight(theta, cfg.w0, cfg.theta0, cfg.mult);
}

double clip_parameter(double theta, const PlasticityConfig& cfg)
{
    return clip_parameter(theta, cfg.theta_min, cfg.theta_max);
}

void update_presyn_trace(SynapseState& s, unsigned pre_spikes, const snn::FilterDecay& decay)
{
    s.trace.decay(decay);
    if (pre_spikes > 0)
        s.trace.add(static_cast<double>(pre_spikes));
    s.y = s.trace.value(decay);
}

void update_eligibility(SynapseState& s, unsigned post_spikes, double post_rate, double dt,
                        double tau_e)
{
    const double drive = static_cast<double>(post_spikes) - post_rate * dt;
    s.e = eligibility_step(s.e, std::exp(-dt / tau_e), s.w, s.y, drive);
}

void update_gradient(SynapseState& s, const RewardSample& reward, double dt,
                     const PlasticityConfig& cfg)
{
    if (reward.value < 0.0)
        throw std::invalid_argument("reward must be non-negative");
    s.g = gradient_step(s.g, std::exp(-dt / cfg.tau_g), dt, reward.value, s.e, cfg.dtheta_max);
}

namespace {

struct ParameterStep {
    double drift_scale;  // beta * dt
    double noise_scale;  // sqrt(2 T beta dt)

    ParameterStep(const PlasticityConfig& cfg, double coarse_dt)
    {
        const double dt = coarse_dt / cfg.beta_time_unit;
        drift_scale = cfg.beta * dt;
        noise_scale = std::sqrt(2.0 * cfg.temperature * cfg.beta * dt);
    }

    double apply(double theta, double g, const PlasticityConfig& cfg, double noise) const
    {
        const double drift = cfg.c_p * (cfg.mu - theta) + cfg.c_g * g;
        return clip_parameter(theta + drift_scale * drift + noise_scale * noise, cfg.theta_min,
                              cfg.theta_max);
    }
};

}  // namespace

void update_parameter(SynapseState& s, const PlasticityConfig& cfg, double coarse_dt, Rng& rng)
{
    const ParameterStep step(cfg, coarse_dt);
    s.theta = step.apply(s.theta, s.g, cfg, rng.normal());
    s.w = map_weight(s.theta, cfg);
}

PlasticityConfig anneal(const PlasticityConfig& base, double elapsed_s)
{
    PlasticityConfig out = base;
    out.beta = base.beta * std::exp(-base.lambda * elapsed_s);
    return out;
}

// -- SynapseTable -----------------------------------------------------------

SynapseTable::SynapseTable(std::span<const Entry> entries, const PlasticityConfig& cfg,
                           std::uint32_t delay)
    : delay_(delay)
{
    if (delay == 0)
        throw std::invalid_argument("plastic synapse delay must be at least one tick");
    const std::size_t n = entries.size();
    source_.reserve(n);
    target_.reserve(n);
    theta_.reserve(n);
    w_.reserve(n);
    e_.assign(n, 0.0);
    g_.assign(n, 0.0);
    std::uint32_t max_id = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& en = entries[i];
        if (i > 0 && en.source < entries[i - 1].source)
            throw std::invalid_argument("plastic synapse entries must be sorted by source");
        if (en.source == en.target)
            throw std::invalid_argument("plastic synapse forms a self-loop");
        source_.push_back(en.source);
        target_.push_back(en.target);
        const double th = clip_parameter(en.theta, cfg);
        theta_.push_back(th);
        w_.push_back(map_weight(th, cfg));
        if (source_ids_.empty() || source_ids_.back() != en.source) {
            source_ids_.push_back(en.source);
            source_begin_.push_back(i);
        }
        max_id = std::max({max_id, en.source, en.target});
    }
    source_begin_.push_back(n);
    slot_of_neuron_.assign(n ? max_id + 1 : 0, -1);
    for (std::size_t k = 0; k < source_ids_.size(); ++k)
        slot_of_neuron_[source_ids_[k]] = static_cast<std::int64_t>(k);
    traces_.assign(source_ids_.size(), snn::KernelFilter{});
    y_.assign(source_ids_.size(), 0.0);
}

std::int64_t SynapseTable::source_slot(std::uint32_t neuron) const
{
    if (neuron >= slot_of_neuron_.size())
        return -1;
    return slot_of_neuron_[neuron];
}

SynapseState SynapseTable::state(std::size_t i) const
{
    SynapseState s;
    const auto slot = static_cast<std::size_t>(slot_of_neuron_[source_[i]]);
    s.trace = traces_[slot];
    s.y = y_[slot];
    s.e = e_[i];
    s.g = g_[i];
    s.theta = theta_[i];
    s.w = w_[i];
    s.source = source_[i];
    s.target = target_[i];
    return s;
}

void SynapseTable::set_theta(std::size_t i, double theta, const PlasticityConfig& cfg)
{
    theta_[i] = clip_parameter(theta, cfg);
    w_[i] = map_weight(theta_[i], cfg);
}

// -- Learner ----------------------------------------------------------------

Learner::Learner(const PlasticityConfig& cfg, const snn::PspKernel& trace_kernel, double fine_dt)
    : cfg_(cfg),
      trace_decay_(snn::FilterDecay::for_step(trace_kernel, fine_dt)),
      dt_(fine_dt),
      e_decay_(std::exp(-fine_dt / cfg.tau_e)),
      g_decay_(std::exp(-fine_dt / cfg.tau_g))
{
}

void Learner::set_config(const PlasticityConfig& cfg)
{
    cfg_ = cfg;
    e_decay_ = std::exp(-dt_ / cfg.tau_e);
    g_decay_ = std::exp(-dt_ / cfg.tau_g);
}

double Learner::fine_step(SynapseTable& table, std::span<const std::uint32_t> spike_counts,
                          std::span<const double> intensity, const RewardSample& reward)
{
    if (reward.value < 0.0)
        throw std::invalid_argument("reward must be non-negative");
    const std::size_t n_neurons = spike_counts.size();
    post_drive_.resize(n_neurons);
    for (std::size_t i = 0; i < n_neurons; ++i)
        post_drive_[i] = static_cast<double>(spike_counts[i]) - intensity[i] * dt_;

    const double r_dt = reward.value * dt_;
    const double clip = cfg_.dtheta_max;
    double checksum = 0.0;
    for (std::size_t slot = 0; slot < table.source_ids_.size(); ++slot) {
        auto& tr = table.traces_[slot];
        tr.decay(trace_decay_);
        const std::uint32_t pre = spike_counts[table.source_ids_[slot]];
        if (pre > 0)
            tr.add(static_cast<double>(pre));
        const double y = tr.value(trace_decay_);
        table.y_[slot] = y;

        const std::size_t begin = table.source_begin_[slot];
        const std::size_t end = table.source_begin_[slot + 1];
        double* e = table.e_.data();
        double* g = table.g_.data();
        const double* w = table.w_.data();
        const std::uint32_t* tgt = table.target_.data();
        const double* drive = post_drive_.data();
        for (std::size_t i = begin; i < end; ++i) {
            const double en = e[i] * e_decay_ + w[i] * y * drive[tgt[i]];
            e[i] = en;
            const double gn = clip_symmetric(g[i] * g_decay_ + r_dt * en, clip);
            g[i] = gn;
            checksum += en + gn;
        }
    }
    return checksum;
}

double Learner::coarse_step(SynapseTable& table, double coarse_dt, Rng& rng) const
{
    const ParameterStep step(cfg_, coarse_dt);
    double sum = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double th = step.apply(table.theta_[i], table.g_[i], cfg_, rng.normal());
        table.theta_[i] = th;
        table.w_[i] = map_weight(th, cfg_.w0, cfg_.theta0, cfg_.mult);
        sum += th;
    }
    return sum;
}

double weak_weight_fraction(std::span<const double> weights, double threshold)
{
    if (!(threshold > 0.0))
        throw std::invalid_argument("weak-weight threshold must be positive");
    if (weights.empty())
        return 0.0;
    const auto weak = std::count_if(weights.begin(), weights.end(),
                                    [threshold](double w) { return w < threshold; });
    return static_cast<double>(weak) / static_cast<double>(weights.size());
}

}  // namespace spore::plasticity
