#pragma once

namespace spore::snn {

/// Peak-normalized double-exponential postsynaptic kernel
///
///     kappa(t) = (exp(-t / tau_fall) - exp(-t / tau_rise)) / Z,
///
/// with Z chosen so that max_t kappa(t) = 1. kappa(t) = 0 for t <= 0.
class PspKernel {
public:
    /// Throws std::invalid_argument unless 0 < tau_rise < tau_fall.
    PspKernel(double tau_rise, double tau_fall);

    double operator()(double elapsed) const;

    double tau_rise() const { return tau_rise_; }
    double tau_fall() const { return tau_fall_; }
    double peak_time() const { return peak_time_; }
    double normalization() const { return norm_; }
    /// Integral of kappa over [0, inf).
    double area() const { return (tau_fall_ - tau_rise_) / norm_; }

private:
    double tau_rise_;
    double tau_fall_;
    double peak_time_;
    double norm_;
};

/// Per-step constants of the exact discrete-time realization of a PspKernel.
struct FilterDecay {
    double rise = 1.0;
    double fall = 1.0;
    double inv_norm = 1.0;

    static FilterDecay for_step(const PspKernel& kernel, double dt);
};

/// Two exponentially decaying states driven by the same impulses; their
/// difference is the kernel-filtered impulse train. Exact on the grid.
struct KernelFilter {
    double rise = 0.0;
    double fall = 0.0;

    void decay(const FilterDecay& d)
    {
        rise *= d.rise;
        fall *= d.fall;
    }
    void add(double amplitude)
    {
        rise += amplitude;
        fall += amplitude;
    }
    double value(const FilterDecay& d) const { return (fall - rise) * d.inv_norm; }
};

}  // namespace spore::snn
