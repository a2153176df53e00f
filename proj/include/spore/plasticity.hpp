#pragma once

#include "spore/clock.hpp"
#include "spore/psp_kernel.hpp"
#include "spore/rng.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace spore::plasticity {

/// Constants of the reward-based synaptic sampling rule.
///
/// Time constants are in seconds. The parameter SDE is integrated with its
/// time measured in `beta_time_unit` seconds (0.1 ms by default), which is the
/// unit the learning rate `beta` and the prior/gradient scales refer to.
struct PlasticityConfig {
    double beta = 1e-7;             // initial learning rate
    double lambda = 8.5e-5;         // learning-rate decay, 1/s
    double temperature = 0.1;
    double c_p = 0.0;               // prior precision scale
    double c_g = 1.0;               // gradient scale
    double mu = 0.0;                // prior mean
    double tau_e = 1.0;             // eligibility time constant, s
    double tau_g = 50.0;            // reward-gradient time constant, s
    double theta_min = -2.0;
    double theta_max = 5.0;
    double dtheta_max = 1.0;        // gradient clip
    double w0 = 1.0;
    double theta0 = 0.0;
    double mult = 10.0;             // output weight multiplier
    double anneal_interval = 600.0; // s
    double beta_time_unit = 1e-4;   // s
};

struct SynapseState {
    snn::KernelFilter trace;  // internal state behind y
    double y = 0.0;
    double e = 0.0;
    double g = 0.0;
    double theta = 0.0;
    double w = 0.0;
    std::uint32_t source = 0;
    std::uint32_t target = 0;
};

/// Non-negative reward r(t) at a tick.
struct RewardSample {
    double value = 0.0;
    Tick tick = 0;
};

// -- scalar kernels shared by the single-synapse operations and the table ---

inline double eligibility_step(double e, double decay, double w, double y, double post_drive)
{
    return e * decay + w * y * post_drive;
}

inline double clip_symmetric(double x, double bound)
{
    return x > bound ? bound : (x < -bound ? -bound : x);
}

inline double gradient_step(double g, double decay, double dt, double reward, double e, double clip)
{
    return clip_symmetric(g * decay + dt * reward * e, clip);
}

inline double clip_parameter(double theta, double lo, double hi)
{
    return theta > hi ? hi : (theta < lo ? lo : theta);
}

/// mult * w0 * exp(theta - theta0) for theta > 0, else 0.
inline double map_weight(double theta, double w0, double theta0, double mult)
{
    return theta > 0.0 ? mult * w0 * std::exp(theta - theta0) : 0.0;
}

// -- operations -------------------------------------------------------------

double map_weight(double theta, const PlasticityConfig& cfg);
double clip_parameter(double theta, const PlasticityConfig& cfg);

/// Advance y one fine step with exact decay; `pre_spikes` unit impulses are
/// added at this tick (their kernel contribution starts at zero).
void update_presyn_trace(SynapseState& s, unsigned pre_spikes, const snn::FilterDecay& decay);

/// One exponential-Euler step of de/dt = -e/tau_e + w y (z_post - rho_post).
/// A spike contributes 1/dt to z_post for its tick, so the step adds
/// w y (post_spikes - post_rate dt). `post_rate` is in 1/s.
void update_eligibility(SynapseState& s, unsigned post_spikes, double post_rate, double dt,
                        double tau_e);

/// One exponential-Euler step of dg/dt = -g/tau_g + r e, then g is clipped to
/// +-dtheta_max. Throws std::invalid_argument on negative reward.
void update_gradient(SynapseState& s, const RewardSample& reward, double dt,
                     const PlasticityConfig& cfg);

/// Coarse-grid Euler-Maruyama step of the parameter SDE over `coarse_dt`
/// seconds, followed by parameter clipping and weight recomputation.
void update_parameter(SynapseState& s, const PlasticityConfig& cfg, double coarse_dt, Rng& rng);

/// `base` with beta replaced by base.beta * exp(-lambda * elapsed_s).
PlasticityConfig anneal(const PlasticityConfig& base, double elapsed_s);

// -- table ------------------------------------------------------------------

/// All plastic synapses of a network in struct-of-arrays form, ordered by
/// source neuron. y depends only on the presynaptic spike train, so one trace
/// is kept per distinct source neuron.
class SynapseTable {
public:
    struct Entry {
        std::uint32_t source;
        std::uint32_t target;
        double theta;
    };

    SynapseTable() = default;
    /// Entries must be sorted by source. Weights are derived from theta.
    SynapseTable(std::span<const Entry> entries, const PlasticityConfig& cfg, std::uint32_t delay = 1);

    std::size_t size() const { return theta_.size(); }
    bool empty() const { return theta_.empty(); }
    std::uint32_t delay() const { return delay_; }

    SynapseState state(std::size_t i) const;

    std::span<const std::uint32_t> sources() const { return source_; }
    std::span<const std::uint32_t> targets() const { return target_; }
    std::span<const double> theta() const { return theta_; }
    std::span<const double> weights() const { return w_; }
    std::span<const double> eligibility() const { return e_; }
    std::span<const double> gradient() const { return g_; }

    /// Distinct presynaptic neurons and their synapse ranges [begin, end).
    std::span<const std::uint32_t> source_neurons() const { return source_ids_; }
    std::pair<std::size_t, std::size_t> range_of_source(std::size_t source_slot) const
    {
        return {source_begin_[source_slot], source_begin_[source_slot + 1]};
    }
    /// Slot of a neuron in source_neurons(), or -1.
    std::int64_t source_slot(std::uint32_t neuron) const;

    std::span<const snn::KernelFilter> traces() const { return traces_; }

    void set_theta(std::size_t i, double theta, const PlasticityConfig& cfg);

private:
    friend class Learner;
    friend struct TableAccess;

    std::vector<std::uint32_t> source_;
    std::vector<std::uint32_t> target_;
    std::vector<double> e_;
    std::vector<double> g_;
    std::vector<double> theta_;
    std::vector<double> w_;
    std::vector<std::uint32_t> source_ids_;
    std::vector<std::size_t> source_begin_;
    std::vector<std::int64_t> slot_of_neuron_;
    std::vector<snn::KernelFilter> traces_;
    std::vector<double> y_;
    std::uint32_t delay_ = 1;
};

/// Mutable access used by checkpointing.
struct TableAccess {
    static std::vector<double>& e(SynapseTable& t) { return t.e_; }
    static std::vector<double>& g(SynapseTable& t) { return t.g_; }
    static std::vector<double>& theta(SynapseTable& t) { return t.theta_; }
    static std::vector<double>& w(SynapseTable& t) { return t.w_; }
    static std::vector<snn::KernelFilter>& traces(SynapseTable& t) { return t.traces_; }
    static std::vector<double>& y(SynapseTable& t) { return t.y_; }
};

/// Applies the rule to a SynapseTable on the dual grid.
///
/// Within a fine tick the order is: y, then e, then g. The caller steps the
/// neurons first and invokes coarse_step() on coarse boundaries.
class Learner {
public:
    Learner(const PlasticityConfig& cfg, const snn::PspKernel& trace_kernel, double fine_dt);

    const PlasticityConfig& config() const { return cfg_; }
    void set_config(const PlasticityConfig& cfg);

    /// `spike_counts` and `intensity` are indexed by neuron id. Returns
    /// sum(e) + sum(g) so callers can detect non-finite state cheaply.
    double fine_step(SynapseTable& table, std::span<const std::uint32_t> spike_counts,
                     std::span<const double> intensity, const RewardSample& reward);

    /// Returns sum(theta) for the same purpose.
    double coarse_step(SynapseTable& table, double coarse_dt, Rng& rng) const;

private:
    PlasticityConfig cfg_;
    snn::FilterDecay trace_decay_;
    double dt_;
    double e_decay_;
    double g_decay_;
    std::vector<double> post_drive_;
};

/// Fraction of synapses with weight strictly below `threshold`.
double weak_weight_fraction(std::span<const double> weights, double threshold);

}  // namespace spore::plasticity
