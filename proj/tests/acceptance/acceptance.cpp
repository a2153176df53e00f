// Acceptance checks, one pass/fail line per criterion.
//
//   acceptance --suite properties   criteria 1-8 (fast oracles)
//   acceptance --suite learning     criteria 9-12 (desk-scale learning runs)
//   acceptance --suite all
//
// Exit status is nonzero when any selected criterion fails.

#include "spore/config.hpp"
#include "spore/decoding.hpp"
#include "spore/environments.hpp"
#include "spore/experiments.hpp"
#include "spore/harness.hpp"
#include "spore/metrics.hpp"
#include "spore/plasticity.hpp"
#include "spore/psp_kernel.hpp"
#include "spore/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace spore;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds)
{
    std::printf("criterion %2d: %s  %s  [%s] (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!o.pass)
        ++failures;
}

void run_criterion(int id, const std::string& name, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, name, o, s);
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// -- 1 ----------------------------------------------------------------------

Outcome eligibility_decay()
{
    const double tau_e = default_config(Task::Reaching).plasticity.tau_e;
    const double dt = 1e-3;
    plasticity::SynapseState s;
    s.e = 1.7;
    s.w = 0.0;
    s.y = 3.0;
    const int steps = static_cast<int>(std::llround(5.0 * tau_e / dt));
    double worst = 0.0;
    for (int n = 1; n <= steps; ++n) {
        plasticity::update_eligibility(s, n % 11 == 0 ? 1u : 0u, 25.0, dt, tau_e);
        const double exact = 1.7 * std::exp(-n * dt / tau_e);
        worst = std::max(worst, std::abs(s.e - exact) / exact);
    }
    return {worst <= 1e-3, "max relative error " + fmt(worst) + " over " + std::to_string(steps) + " steps"};
}

// -- 2 ----------------------------------------------------------------------

Outcome ou_stationarity()
{
    auto cfg = default_config(Task::Reaching).plasticity;
    cfg.c_g = 0.0;
    cfg.c_p = 0.1;
    cfg.mu = 0.0;
    cfg.temperature = 0.1;
    cfg.theta_min = -50.0;
    cfg.theta_max = 50.0;
    const double coarse_dt = default_config(Task::Reaching).harness.coarse_dt;
    // beta c_p dt = 0.01 per coarse step: relaxation over ~100 steps, so 10^6
    // steps hold ~5000 independent variance samples and the Euler bias of the
    // discrete stationary variance is 0.5 %.
    cfg.beta = 0.01 / (cfg.c_p * coarse_dt / cfg.beta_time_unit);
    Rng rng = Rng::derive(1, "acceptance-ou");
    plasticity::SynapseState s;
    for (int i = 0; i < 10000; ++i)
        plasticity::update_parameter(s, cfg, coarse_dt, rng);
    const int n = 1000000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        plasticity::update_parameter(s, cfg, coarse_dt, rng);
        sum += s.theta;
        sq += s.theta * s.theta;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    const double target = cfg.temperature / cfg.c_p;
    return {std::abs(var - target) <= 0.1 * target, "Var(theta) = " + fmt(var) + ", target " + fmt(target)};
}

// -- 3 ----------------------------------------------------------------------

Outcome weight_mapping()
{
    auto cfg = default_config(Task::Reaching).plasticity;
    bool ok = true;
    std::string why;
    for (double th : {0.0, -0.0, -1e-300, -0.5, -2.0, -50.0})
        if (plasticity::map_weight(th, cfg) != 0.0) {
            ok = false;
            why += " nonzero at " + fmt(th);
        }
    for (double th0 : {0.0, 0.5, 2.0}) {
        auto c = cfg;
        c.theta0 = th0;
        const double at = plasticity::map_weight(th0, c);
        if (th0 > 0.0 && at != c.mult * c.w0) {
            ok = false;
            why += " map_weight(theta0) != mult w0";
        }
    }
    double prev = 0.0;
    int violations = 0;
    for (int i = 1; i <= 10000; ++i) {
        const double th = cfg.theta_max * i / 10000.0;
        const double w = plasticity::map_weight(th, cfg);
        violations += !(w > prev);
        prev = w;
    }
    if (violations) {
        ok = false;
        why += " " + std::to_string(violations) + " monotonicity violations";
    }
    return {ok, ok ? "zero set, theta0 value and 10^4-point monotonicity hold" : why};
}

// -- 4 ----------------------------------------------------------------------

Outcome reward_points()
{
    const double a = env::lane_reward(0.0, 0.1);
    const double b = env::lane_reward(5.0, 0.0);
    env::ReachingState st{{3.0, -4.0}, {}};
    const env::Vec2 toward{-0.6, 0.8};
    const double c = env::reaching_reward(st, toward, 45.0, 0.1);
    const bool ok = std::abs(a - std::exp(-0.7)) <= 1e-9 && std::abs(b - std::exp(-0.75)) <= 1e-9 &&
                    std::abs(c - 1120.0) <= 1e-6 && std::abs(a - 0.5) < 0.01 && std::abs(b - 0.5) < 0.03;
    return {ok, "lane(0 deg, 0.1 m) = " + fmt(a) + ", lane(5 deg, 0 m) = " + fmt(b) + ", reaching = " + fmt(c)};
}

// -- 5 ----------------------------------------------------------------------

Outcome decoder_identities()
{
    const auto dec = default_config(Task::Reaching).decoder;
    Rng rng = Rng::derive(5, "acceptance-decoder");
    double uniform_err = 0.0, shift_err = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> u(8, rng.uniform(0.0, 100.0));
        const auto v = motor::decode_velocity(u, dec.velocity_gain);
        uniform_err = std::max({uniform_err, std::abs(v.vx), std::abs(v.vy)});

        std::vector<double> a(8), s(8);
        for (auto& x : a)
            x = rng.uniform(0.0, 100.0);
        const int k = 1 + static_cast<int>(rng.uniform() * 7);
        for (int i = 0; i < 8; ++i)
            s[(i + k) % 8] = a[i];
        const auto va = motor::decode_velocity(a, dec.velocity_gain);
        const auto vs = motor::decode_velocity(s, dec.velocity_gain);
        const double ang = 2.0 * std::numbers::pi * k / 8;
        const double rx = va.vx * std::cos(ang) - va.vy * std::sin(ang);
        const double ry = va.vx * std::sin(ang) + va.vy * std::cos(ang);
        shift_err = std::max({shift_err, std::abs(rx - vs.vx), std::abs(ry - vs.vy)});
    }

    motor::SteeringDecoder sd{dec.steering_scale, dec.activity_eps, dec.first_population_negative};
    int antisym = 0, scale = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> a(8), swapped(8), scaled(8);
        for (auto& x : a)
            x = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 50.0);
        const double c = std::pow(10.0, rng.uniform(-2.0, 2.0));
        for (int i = 0; i < 4; ++i) {
            swapped[i] = a[i + 4];
            swapped[i + 4] = a[i];
        }
        for (int i = 0; i < 8; ++i)
            scaled[i] = c * a[i];
        const auto s0 = motor::decode_steering(a, sd);
        if (s0.silent)
            continue;
        antisym += motor::decode_steering(swapped, sd).angle != -s0.angle;
        const auto s1 = motor::decode_steering(scaled, sd);
        bool near = false;
        for (double bnd : {-10.0, -2.5, 2.5, 10.0})
            near = near || std::abs(s0.scaled - bnd) < 1e-9;
        scale += !near && s1.angle != s0.angle;
    }

    std::vector<double> seen;
    for (int left = 0; left <= 20; ++left) {
        std::vector<double> a{static_cast<double>(left), 0, 0, 0, static_cast<double>(20 - left), 0, 0, 0};
        seen.push_back(motor::decode_steering(a, sd).angle);
    }
    int reachable = 0;
    for (double cmd : motor::kSteeringCommands)
        reachable += std::find(seen.begin(), seen.end(), cmd) != seen.end();

    const bool ok = uniform_err <= 1e-12 && shift_err <= 1e-9 && antisym == 0 && scale == 0 && reachable == 5;
    return {ok, "uniform |v| " + fmt(uniform_err) + ", shift error " + fmt(shift_err) + ", antisymmetry failures " +
                    std::to_string(antisym) + ", scale failures " + std::to_string(scale) + ", commands reached " +
                    std::to_string(reachable) + "/5"};
}

// -- 6 ----------------------------------------------------------------------

Outcome annealing_closed_form()
{
    // Walk the schedule the way the loop does: one update per interval,
    // each from total elapsed time.
    const auto base = default_config(Task::Lane).plasticity;
    const snn::PspKernel kernel(2e-3, 20e-3);
    plasticity::Learner learner(plasticity::anneal(base, 0.0), kernel, 1e-3);
    const int updates = static_cast<int>(std::llround(3.0 * 3600.0 / base.anneal_interval));
    for (int k = 1; k <= updates; ++k)
        learner.set_config(plasticity::anneal(base, k * base.anneal_interval));
    const double ratio = learner.config().beta / base.beta;
    const double exact = std::exp(-base.lambda * 10800.0);
    // The stated 0.399 is exp(-0.918) to three digits; the schedule must hit
    // the closed form to 1e-6 and round to 0.399.
    const bool ok = std::abs(ratio - exact) <= 1e-6 && std::abs(ratio - 0.399) < 5e-4;
    return {ok, "beta(3 h) / beta0 = " + fmt(ratio) + ", closed form " + fmt(exact)};
}

// -- 7 ----------------------------------------------------------------------

Outcome determinism()
{
    std::string detail;
    bool ok = true;
    for (Task task : {Task::Reaching, Task::Lane}) {
        auto cfg = default_config(task);
        cfg.duration = 60.0;
        cfg.seed = 7;
        metrics::MemorySink a, b;
        harness::RunOptions oa, ob;
        oa.sink = &a;
        ob.sink = &b;
        harness::run_experiment(cfg, oa);
        harness::run_experiment(cfg, ob);
        const auto ta = a.text(), tb = b.text();
        const bool same = ta == tb;
        ok = ok && same && a.lines().size() > 60000;
        detail += std::string(task_name(task)) + ": " + std::to_string(ta.size()) + " bytes " +
                  (same ? "identical" : "DIFFERENT") + "; ";
    }
    return {ok, detail};
}

// -- 8 ----------------------------------------------------------------------

struct Trajectory {
    std::vector<double> e;
    std::vector<double> g;
};

// e and g sampled every millisecond over `duration` for a fixed spike record
// on the millisecond grid, a smooth postsynaptic rate and a smooth reward.
Trajectory trace_run(double dt, double duration)
{
    const auto cfg0 = default_config(Task::Reaching);
    auto cfg = cfg0.plasticity;
    cfg.dtheta_max = 1e12;
    const snn::PspKernel kernel(cfg0.neuron.tau_rise, cfg0.neuron.tau_fall);
    const auto decay = snn::FilterDecay::for_step(kernel, dt);
    const long per_ms = std::lround(1e-3 / dt);
    const long steps = std::lround(duration / dt);
    plasticity::SynapseState s;
    s.w = 12.0;
    Trajectory out;
    Rng rng = Rng::derive(8, "acceptance-euler");
    std::vector<char> pre(static_cast<std::size_t>(duration * 1e3) + 2), post(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) {
        pre[i] = rng.uniform() < 0.03;
        post[i] = rng.uniform() < 0.02;
    }
    for (long n = 1; n <= steps; ++n) {
        const double t = n * dt;
        const bool on_ms = n % per_ms == 0;
        const auto ms = static_cast<std::size_t>(n / per_ms);
        plasticity::update_presyn_trace(s, on_ms && pre[ms] ? 1u : 0u, decay);
        const double rate = 20.0 + 15.0 * std::sin(2.0 * std::numbers::pi * 1.3 * t);
        plasticity::update_eligibility(s, on_ms && post[ms] ? 1u : 0u, rate, dt, cfg.tau_e);
        const double reward = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * 0.7 * t);
        plasticity::update_gradient(s, {reward, n}, dt, cfg);
        if (on_ms) {
            out.e.push_back(s.e);
            out.g.push_back(s.g);
        }
    }
    return out;
}

double max_error(const std::vector<double>& a, const std::vector<double>& ref)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - ref[i]));
    return m;
}

Outcome euler_order()
{
    const double duration = 5.0;
    const auto ref = trace_run(1e-5, duration);
    const auto coarse = trace_run(1e-3, duration);
    const auto fine = trace_run(5e-4, duration);
    const double re = max_error(coarse.e, ref.e) / max_error(fine.e, ref.e);
    const double rg = max_error(coarse.g, ref.g) / max_error(fine.g, ref.g);
    const bool ok = re >= 1.5 && re <= 2.5 && rg >= 1.5 && rg <= 2.5;
    return {ok, "error ratio e " + fmt(re) + ", g " + fmt(rg)};
}

// -- learning runs ----------------------------------------------------------

unsigned job_count()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

constexpr int kSeeds = 4;

ExperimentConfig scaled_reaching(double c_p, std::uint64_t seed)
{
    auto cfg = default_config(Task::Reaching);
    cfg.vision.reaching_camera.width = 8;
    cfg.vision.reaching_camera.height = 8;
    cfg.duration = 7200.0;
    cfg.plasticity.c_p = c_p;
    cfg.seed = seed;
    return cfg;
}

struct LearningResults {
    std::vector<harness::RunRecord> flat, mid, strong, random;
    std::vector<harness::RunRecord> lane_on, lane_off;
};

std::vector<harness::RunRecord> run_many(const std::vector<ExperimentConfig>& cfgs, bool random)
{
    std::vector<harness::RunRecord> out(cfgs.size());
    exp::parallel_for(cfgs.size(), job_count(), [&](std::size_t i) {
        out[i] = random ? harness::random_policy_baseline(cfgs[i]) : harness::run_experiment(cfgs[i]);
        std::fprintf(stderr, "  finished %s seed %llu: %zu reaches, %zu resets\n", task_name(cfgs[i].task).data(),
                     static_cast<unsigned long long>(cfgs[i].seed), out[i].reach_ticks.size(),
                     out[i].reset_ticks.size());
    });
    return out;
}

double mean_of(const std::vector<harness::RunRecord>& runs, const std::function<double(const harness::RunRecord&)>& f)
{
    double s = 0.0;
    for (const auto& r : runs)
        s += f(r);
    return runs.empty() ? 0.0 : s / static_cast<double>(runs.size());
}

std::string list_of(const std::vector<harness::RunRecord>& runs,
                    const std::function<double(const harness::RunRecord&)>& f)
{
    std::string s;
    for (const auto& r : runs)
        s += (s.empty() ? "" : ",") + fmt(f(r));
    return s;
}

double final_rate(const harness::RunRecord& r)
{
    return harness::final_reach_rate(r, 250.0);
}

double baseline_rate(const harness::RunRecord& r)
{
    return static_cast<double>(r.reach_ticks.size()) * 250.0 / r.seconds();
}

double weak_at(const harness::RunRecord& r, double t)
{
    for (const auto& s : r.snapshots)
        if (std::abs(s.time - t) < 1e-6)
            return s.weak_fraction;
    return std::nan("");
}

double lane_final_hour(const harness::RunRecord& r)
{
    return harness::mean_time_on_lane(r, r.seconds() - 3600.0, r.seconds());
}

void learning_suite()
{
    LearningResults res;
    auto configs = [](double c_p) {
        std::vector<ExperimentConfig> v;
        for (int s = 0; s < kSeeds; ++s)
            v.push_back(scaled_reaching(c_p, 1 + s));
        return v;
    };
    std::fprintf(stderr, "reaching runs (8x8 camera, 2 h each)\n");
    res.random = run_many(configs(0.0), true);
    res.flat = run_many(configs(0.0), false);
    const double base = mean_of(res.random, baseline_rate);
    const double flat = mean_of(res.flat, final_rate);

    run_criterion(9, "reaching with a flat prior beats 3x the random baseline", [&]() -> Outcome {
        return {flat >= 3.0 * base, "final 250 s reach rate " + fmt(flat) + " (runs " + list_of(res.flat, final_rate) +
                                        ") vs random " + fmt(base) + " per 250 s (runs " +
                                        list_of(res.random, baseline_rate) + ")"};
    });

    run_criterion(12, "weak-weight fraction rises with a flat prior", [&]() -> Outcome {
        bool ok = true;
        std::string d;
        for (const auto& r : res.flat) {
            const double w0 = weak_at(r, 0.0), w1 = weak_at(r, 3600.0), w2 = weak_at(r, 7200.0);
            ok = ok && w1 > w0 && w2 > w0;
            d += fmt(w0) + "->" + fmt(w1) + "->" + fmt(w2) + "; ";
        }
        return {ok, "weak fraction at 0/1/2 h per run: " + d};
    });

    res.mid = run_many(configs(0.25), false);
    res.strong = run_many(configs(1.0), false);
    run_criterion(10, "prior ordering c_p=0 >= c_p=0.25 > c_p=1, c_p=1 near random", [&]() -> Outcome {
        const double mid = mean_of(res.mid, final_rate);
        const double strong = mean_of(res.strong, final_rate);
        const bool near_random = strong <= 2.0 * base && strong >= base / 2.0;
        const bool ok = flat >= mid && mid > strong && near_random;
        return {ok, "final 250 s reach rate c_p=0 " + fmt(flat) + ", c_p=0.25 " + fmt(mid) + " (runs " +
                        list_of(res.mid, final_rate) + "), c_p=1 " + fmt(strong) + " (runs " +
                        list_of(res.strong, final_rate) + "), random " + fmt(base)};
    });

    std::fprintf(stderr, "lane runs (4 h each)\n");
    std::vector<ExperimentConfig> on, off;
    for (int s = 0; s < kSeeds; ++s) {
        auto cfg = default_config(Task::Lane);
        cfg.duration = 4.0 * 3600.0;
        cfg.seed = 1 + s;
        on.push_back(cfg);
        cfg.plasticity.lambda = 0.0;
        off.push_back(cfg);
    }
    res.lane_on = run_many(on, false);
    res.lane_off = run_many(off, false);
    run_criterion(11, "annealing doubles time on lane in the final hour", [&]() -> Outcome {
        const double a = mean_of(res.lane_on, lane_final_hour);
        const double b = mean_of(res.lane_off, lane_final_hour);
        return {a >= 2.0 * b, "mean time on lane, final hour: annealed " + fmt(a) + " s (runs " +
                                  list_of(res.lane_on, lane_final_hour) + "), constant " + fmt(b) + " s (runs " +
                                  list_of(res.lane_off, lane_final_hour) + ")"};
    });
}

void properties_suite()
{
    run_criterion(1, "eligibility decays as e(0) exp(-t / tau_e)", eligibility_decay);
    run_criterion(2, "OU stationary variance T / c_p", ou_stationarity);
    run_criterion(3, "weight mapping zero set, scale and monotonicity", weight_mapping);
    run_criterion(4, "reward point values", reward_points);
    run_criterion(5, "decoder identities", decoder_identities);
    run_criterion(6, "annealed learning rate after 3 h", annealing_closed_form);
    run_criterion(7, "equal seeds give byte-identical metrics streams", determinism);
    run_criterion(8, "first-order convergence of e and g", euler_order);
}

}  // namespace

int main(int argc, char** argv)
{
    std::string suite = "all";
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--suite") == 0 && i + 1 < argc)
            suite = argv[++i];
        else {
            std::fprintf(stderr, "usage: acceptance [--suite properties|learning|all]\n");
            return 1;
        }
    }
    if (suite != "properties" && suite != "learning" && suite != "all") {
        std::fprintf(stderr, "unknown suite %s\n", suite.c_str());
        return 1;
    }
    if (suite != "learning")
        properties_suite();
    if (suite != "properties")
        learning_suite();
    std::printf("%s: %d criteria failed\n", suite.c_str(), failures);
    return failures == 0 ? 0 : 1;
}
