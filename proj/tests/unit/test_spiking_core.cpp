#include "spore/clock.hpp"
#include "spore/network.hpp"
#include "spore/neuron.hpp"
#include "spore/psp_kernel.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>

using namespace spore;
using namespace spore::snn;

TEST_CASE("kernel is zero at and before onset and decays to zero")
{
    PspKernel k(2e-3, 20e-3);
    CHECK(k(0.0) == 0.0);
    CHECK(k(-1.0) == 0.0);
    CHECK(k(10.0) < 1e-100);
}

TEST_CASE("kernel peaks at one at the analytic peak time")
{
    for (auto [r, f] : {std::pair{2e-3, 20e-3}, std::pair{1e-3, 3e-3}, std::pair{5e-3, 50e-3}}) {
        PspKernel k(r, f);
        const double tp = r * f / (f - r) * std::log(f / r);
        CHECK(k.peak_time() == doctest::Approx(tp).epsilon(1e-12));
        CHECK(k(tp) == doctest::Approx(1.0).epsilon(1e-12));
        double best = 0.0, best_t = 0.0;
        for (int i = 1; i < 200000; ++i) {
            const double t = i * 10.0 * f / 200000;
            if (k(t) > best) {
                best = k(t);
                best_t = t;
            }
        }
        CHECK(best <= 1.0 + 1e-12);
        CHECK(std::abs(best_t - tp) < 10.0 * f / 200000);
    }
}

TEST_CASE("kernel rejects misordered time constants")
{
    CHECK_THROWS_AS(PspKernel(2e-3, 2e-3), std::invalid_argument);
    CHECK_THROWS_AS(PspKernel(3e-3, 2e-3), std::invalid_argument);
    CHECK_THROWS_AS(PspKernel(0.0, 2e-3), std::invalid_argument);
}

TEST_CASE("two-state filter reproduces the kernel on the grid")
{
    PspKernel k(2e-3, 20e-3);
    const auto d = FilterDecay::for_step(k, 1e-3);
    KernelFilter f;
    f.add(1.0);
    for (int n = 1; n < 200; ++n) {
        f.decay(d);
        CHECK(f.value(d) == doctest::Approx(k(n * 1e-3)).epsilon(1e-9).scale(1e-30));
    }
}

TEST_CASE("filter superposition")
{
    PspKernel k(2e-3, 20e-3);
    const auto d = FilterDecay::for_step(k, 1e-3);
    KernelFilter a, b, both;
    for (int n = 0; n < 100; ++n) {
        a.decay(d);
        b.decay(d);
        both.decay(d);
        if (n == 3) {
            a.add(0.7);
            both.add(0.7);
        }
        if (n == 11) {
            b.add(-1.3);
            both.add(-1.3);
        }
        CHECK(both.value(d) == doctest::Approx(a.value(d) + b.value(d)).epsilon(1e-12).scale(1e-12));
    }
}

TEST_CASE("rate link point values")
{
    CHECK(neuron_rate(0.0, 10.0, 1.0, 1000.0) == 10.0);
    CHECK(neuron_rate(1.0, 10.0, 1.0, 1000.0) == doctest::Approx(10.0 * std::exp(1.0)).epsilon(1e-15));
    CHECK(neuron_rate(1e6, 10.0, 1.0, 1000.0) == 1000.0);
    CHECK(neuron_rate(std::numeric_limits<double>::infinity(), 10.0, 1.0, 1000.0) == 1000.0);
    CHECK(neuron_rate(-1e6, 10.0, 1.0, 1000.0) == 0.0);
}

TEST_CASE("rate is strictly increasing below the clamp")
{
    double prev = -1.0;
    for (int i = -4000; i < 4000; ++i) {
        const double r = neuron_rate(i * 1e-3, 10.0, 1.0, 1000.0);
        if (r >= 1000.0)
            break;
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("zero rate never spikes")
{
    NeuronParams p;
    p.rate_scale = 10.0;
    NeuronDynamics dyn(p, 1e-3);
    NeuronState st;
    Rng rng(1);
    for (Tick t = 0; t < 10000; ++t)
        CHECK_FALSE(step_neuron(st, 0.0, dyn, rng, t, -1e6));
}

TEST_CASE("saturated neuron spikes with probability 1 - 1/e per tick without refractoriness")
{
    NeuronParams p;
    p.refractory = 0.0;
    NeuronDynamics dyn(p, 1e-3);
    NeuronState st;
    Rng rng(2);
    const int n = 100000;
    int spikes = 0;
    for (Tick t = 0; t < n; ++t)
        spikes += step_neuron(st, 0.0, dyn, rng, t, 1e6);
    const double p1 = 1.0 - std::exp(-1.0);
    CHECK(std::abs(spikes / static_cast<double>(n) - p1) < 0.01 * p1);
    CHECK(st.intensity == doctest::Approx(p1 / 1e-3));
}

TEST_CASE("refractory window blocks spikes")
{
    NeuronParams p;
    p.refractory = 5e-3;
    NeuronDynamics dyn(p, 1e-3);
    CHECK(dyn.refractory_ticks() == 5);
    NeuronState st;
    Rng rng(3);
    Tick last = -100;
    for (Tick t = 0; t < 100000; ++t) {
        if (step_neuron(st, 0.0, dyn, rng, t, 1e6)) {
            CHECK(t - last >= 5);
            last = t;
        } else if (t - last < 5) {
            CHECK(st.intensity == 0.0);
        }
    }
}

TEST_CASE("constant-rate neuron fires at its analytic rate")
{
    NeuronParams p;
    p.refractory = 0.0;
    NeuronDynamics dyn(p, 1e-3);
    NeuronState st;
    Rng rng(4);
    const int n = 200000;
    int spikes = 0;
    for (Tick t = 0; t < n; ++t)
        spikes += step_neuron(st, 0.0, dyn, rng, t, p.sensitivity * std::log(5.0));  // 50 Hz
    const double prob = 1.0 - std::exp(-50.0 * 1e-3);
    const double se = std::sqrt(n * prob * (1 - prob));
    CHECK(std::abs(spikes - n * prob) < 3.0 * se);
}

TEST_CASE("equal membranes give equal rates")
{
    NeuronParams p;
    NeuronDynamics dyn(p, 1e-3);
    NeuronState a, b;
    Rng ra(1), rb(99);
    for (Tick t = 0; t < 50; ++t) {
        step_neuron(a, t == 3 ? 0.5 : 0.0, dyn, ra, t);
        step_neuron(b, t == 3 ? 0.5 : 0.0, dyn, rb, t);
        CHECK(a.membrane == b.membrane);
        CHECK(a.rate == b.rate);
    }
}

namespace {

NeuronTable table_of(std::initializer_list<NeuronKind> kinds)
{
    NeuronTable t;
    t.kinds = kinds;
    return t;
}

}  // namespace

TEST_CASE("propagation fan-out")
{
    std::vector<StaticSynapse> none;
    StaticWiring empty(none, 12);
    plasticity::SynapseTable no_plastic;
    CHECK(list_deliveries({}, empty, no_plastic).empty());

    std::vector<StaticSynapse> one{{0, 1, 2.5, 1}};
    StaticWiring w1(one, 2);
    std::vector<SpikeEvent> ev{{0, 7, 1}};
    const auto d = list_deliveries(ev, w1, no_plastic);
    REQUIRE(d.size() == 1);
    CHECK(d[0].target == 1);
    CHECK(d[0].tick == 8);
    CHECK(d[0].amplitude == 2.5);

    plasticity::PlasticityConfig cfg;
    std::vector<plasticity::SynapseTable::Entry> e(10, {0, 1, 1.0});
    plasticity::SynapseTable ten(e, cfg);
    const auto d10 = list_deliveries(ev, empty, ten);
    CHECK(d10.size() == 10);
    for (const auto& x : d10)
        CHECK(x.amplitude == plasticity::map_weight(1.0, cfg));
}

TEST_CASE("static wiring rejects unknown neurons and zero delays")
{
    std::vector<StaticSynapse> bad{{0, 5, 1.0, 1}};
    CHECK_THROWS_AS(StaticWiring(bad, 2), std::invalid_argument);
    std::vector<StaticSynapse> zero{{0, 1, 1.0, 0}};
    CHECK_THROWS_AS(StaticWiring(zero, 2), std::invalid_argument);
}

TEST_CASE("injected source spike arrives at its target one tick later")
{
    auto nt = table_of({NeuronKind::Source, NeuronKind::Stochastic});
    std::vector<StaticSynapse> syn{{0, 1, 3.0, 1}};
    NeuronParams p;
    Network net(nt, syn, {}, p, 1e-3);
    Rng rng(5);
    net.inject(0, 2);
    net.step_neurons(0, rng);
    CHECK(net.spike_counts()[0] == 2);
    net.propagate(0);
    net.step_neurons(1, rng);
    // Onset tick: the kernel is zero at the arrival tick and rises after.
    const auto d = FilterDecay::for_step(PspKernel(p.tau_rise, p.tau_fall), 1e-3);
    CHECK(net.states()[1].membrane == 0.0);
    net.propagate(1);
    net.step_neurons(2, rng);
    KernelFilter ref;
    ref.add(6.0);
    ref.decay(d);
    CHECK(net.states()[1].membrane == doctest::Approx(ref.value(d)).epsilon(1e-12));
    CHECK_THROWS_AS(net.inject(7, 1), std::out_of_range);
}

TEST_CASE("network stepping is deterministic per seed")
{
    auto build = [] {
        auto nt = table_of({NeuronKind::PoissonSource, NeuronKind::Stochastic, NeuronKind::Stochastic});
        nt.poisson_rate = {200.0, 0.0, 0.0};
        std::vector<StaticSynapse> syn{{0, 1, 2.0, 1}, {1, 2, 1.5, 2}, {2, 1, -1.0, 1}};
        return Network(nt, syn, {}, NeuronParams{}, 1e-3);
    };
    auto a = build(), b = build();
    Rng ra(77), rb(77);
    for (Tick t = 0; t < 20000; ++t) {
        a.step_neurons(t, ra);
        b.step_neurons(t, rb);
        for (int i = 0; i < 3; ++i)
            REQUIRE(a.spike_counts()[i] == b.spike_counts()[i]);
        a.propagate(t);
        b.propagate(t);
    }
}

TEST_CASE("clock arithmetic")
{
    SimClock c;
    CHECK(c.coarse_dt() == doctest::Approx(0.1));
    c.tick = 100;
    CHECK(c.at_coarse_boundary());
    c.tick = 150;
    CHECK_FALSE(c.at_coarse_boundary());
    CHECK(whole_steps(60.0, 1e-3) == 60000);
    CHECK(whole_steps(0.0, 1e-3) == 0);
    CHECK_THROWS_AS(whole_steps(1.00005, 1e-3), std::invalid_argument);
    CHECK(is_multiple(0.3, 0.1));
    CHECK_FALSE(is_multiple(0.35, 0.1));
}
