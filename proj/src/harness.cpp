#include "spore/harness.hpp"

#include "spore/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#if defined(__SSE__) || defined(__x86_64__)
#include <xmmintrin.h>
#define SPORE_HAVE_MXCSR 1
#endif

namespace spore::harness {

void smooth_reward(RewardFilterState& state, double raw, double dt)
{
    if (!(raw >= 0.0))
        throw std::invalid_argument("reward must be non-negative");
    const double decay = std::exp(-dt / state.tau_r);
    state.smoothed = state.smoothed * decay + (1.0 - decay) * raw;
}

// -- aggregates -------------------------------------------------------------

std::size_t reach_count(const RunRecord& r, double t0, double t1)
{
    std::size_t n = 0;
    for (Tick t : r.reach_ticks) {
        const double s = static_cast<double>(t) * r.fine_dt;
        if (s > t0 + 1e-9 && s <= t1 + 1e-9)
            ++n;
    }
    return n;
}

std::vector<std::size_t> reach_rate_series(const RunRecord& r, double bin)
{
    std::vector<std::size_t> out;
    const auto bins = static_cast<std::size_t>(std::floor(r.seconds() / bin + 1e-9));
    for (std::size_t b = 0; b < bins; ++b)
        out.push_back(reach_count(r, static_cast<double>(b) * bin, static_cast<double>(b + 1) * bin));
    return out;
}

double final_reach_rate(const RunRecord& r, double bin)
{
    const double end = r.seconds();
    const double span = std::min(bin, end);
    if (span <= 0.0)
        return 0.0;
    return static_cast<double>(reach_count(r, end - span, end)) * bin / span;
}

std::vector<LaneAttempt> lane_attempts(const RunRecord& r)
{
    std::vector<LaneAttempt> out;
    double start = 0.0;
    for (Tick t : r.reset_ticks) {
        const double s = static_cast<double>(t) * r.fine_dt;
        out.push_back({start, s, false});
        start = s;
    }
    if (r.seconds() > start)
        out.push_back({start, r.seconds(), true});
    return out;
}

double mean_time_on_lane(const RunRecord& r, double t0, double t1)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& a : lane_attempts(r)) {
        if (a.end > t0 + 1e-9 && a.end <= t1 + 1e-9) {
            sum += a.duration();
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

bool aggregates_consistent(const RunRecord& r)
{
    std::vector<Tick> reaches, resets;
    for (const auto& w : r.window_records) {
        if (w.reached)
            reaches.push_back(w.tick);
        if (w.reset)
            resets.push_back(w.tick);
    }
    return reaches == r.reach_ticks && resets == r.reset_ticks &&
           r.window_records.size() == r.windows;
}

// -- simulation -------------------------------------------------------------

namespace {

#ifdef SPORE_HAVE_MXCSR
/// Flushes subnormals to zero while the loop runs; long silent stretches
/// otherwise drive decaying traces into the slow subnormal range.
class FlushDenormals {
public:
    FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
    ~FlushDenormals() { _mm_setcsr(saved_); }

private:
    unsigned saved_;
};
#else
struct FlushDenormals {};
#endif

template <typename T>
void put_rng(ckpt::ByteWriter& w, const T& rng)
{
    w.put_string(rng.save());
}

}  // namespace

Simulation::Simulation(const ExperimentConfig& cfg, RunOptions opts) : cfg_(cfg), opts_(opts)
{
    if (auto issues = check_config(cfg_); !issues.empty())
        throw ConfigError(std::move(issues));
    hash_ = config_hash(cfg_);
    const auto& h = cfg_.harness;
    window_ticks_ = whole_steps(h.window, h.fine_dt);
    window_s_ = static_cast<double>(window_ticks_) * h.fine_dt;
    coarse_ticks_ = whole_steps(h.coarse_dt, h.fine_dt);
    anneal_ticks_ = whole_steps(cfg_.plasticity.anneal_interval, h.fine_dt);
    snapshot_ticks_ = std::max<Tick>(1, static_cast<Tick>(std::llround(h.snapshot_every / h.fine_dt)));
    hold_windows_ = std::max<Tick>(1, static_cast<Tick>(std::llround(h.baseline_hold / window_s_)));
    end_tick_ = whole_steps(cfg_.duration, h.fine_dt);

    const auto seed = cfg_.seed;
    rng_network_ = Rng::derive(seed, "network");
    rng_plasticity_ = Rng::derive(seed, "plasticity");
    rng_env_ = Rng::derive(seed, "environment");
    rng_encoder_ = Rng::derive(seed, "encoder");
    rng_policy_ = Rng::derive(seed, "policy");
    Rng rng_topology = Rng::derive(seed, "topology");
    topology_ = topo::build_network(cfg_, rng_topology);

    if (opts_.policy == Policy::Network) {
        network_ = std::make_unique<snn::Network>(topology_.neurons, topology_.static_synapses, topology_.plastic,
                                                  cfg_.neuron, h.fine_dt);
        learner_ = std::make_unique<plasticity::Learner>(
            plasticity::anneal(cfg_.plasticity, 0.0), snn::PspKernel(cfg_.neuron.tau_rise, cfg_.neuron.tau_fall),
            h.fine_dt);
    }
    const auto motors = topology_.population("motor");
    motor_window_spikes_.assign(motors.size, 0);
    activity_ = motor::ActivityTrace(motors.size, cfg_.decoder.tau);
    reward_.tau_r = h.tau_r;

    if (cfg_.task == Task::Reaching) {
        reaching_camera_ = std::make_unique<vision::ReachingCamera>(cfg_.vision.reaching_camera, cfg_.reaching);
        frame_ = vision::IntensityFrame(reaching_camera_->width(), reaching_camera_->height());
        reaching_.ball_pos = env::random_ball_position(cfg_.reaching, rng_env_);
    } else {
        lane_camera_ = std::make_unique<vision::LaneCamera>(cfg_.vision.lane_camera, cfg_.lane.lane_width);
        frame_ = vision::IntensityFrame(lane_camera_->width(), lane_camera_->height());
        track_ = env::Track::rounded_rectangle(cfg_.lane.straight, cfg_.lane.radius);
        lane_ = env::lane_start_state(cfg_.lane, track_);
    }
    dvs_ = vision::DvsMemory(frame_.width, frame_.height);

    record_.task = cfg_.task;
    record_.seed = seed;
    record_.config_hash = hash_;
    record_.fine_dt = h.fine_dt;
    record_.window = window_s_;

    if (opts_.log)
        *opts_.log << topo::describe(topology_) << "\n";
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;

double Simulation::current_beta() const
{
    if (learner_)
        return learner_->config().beta;
    const Tick epochs = tick_ / anneal_ticks_;
    return plasticity::anneal(cfg_.plasticity, static_cast<double>(epochs * anneal_ticks_) * cfg_.harness.fine_dt).beta;
}

void Simulation::write_header()
{
    if (header_written_)
        return;
    header_written_ = true;
    if (!opts_.sink)
        return;
    std::string edges = "[";
    for (double e : metrics::histogram_edges()) {
        if (edges.size() > 1)
            edges += ',';
        edges += metrics::format_double(e);
    }
    edges += ']';
    // Output destinations stay out of the stream so it does not depend on
    // where it is written.
    auto recorded = cfg_;
    recorded.output = OutputConfig{};
    const auto& line = line_.begin()
                           .field("type", "header")
                           .field("schema", metrics::kSchema)
                           .field("version", metrics::kSchemaVersion)
                           .field("config_hash", hash_)
                           .field("task", task_name(cfg_.task))
                           .field("seed", static_cast<std::uint64_t>(cfg_.seed))
                           .field("policy", opts_.policy == Policy::Network ? "network" : "random")
                           .field("learning", opts_.policy == Policy::Network && opts_.learning)
                           .field("fine_dt", cfg_.harness.fine_dt)
                           .field("window", window_s_)
                           .field("start_tick", static_cast<std::int64_t>(tick_))
                           .field("topology", topo::describe(topology_))
                           .raw("hist_edges", edges)
                           .raw("config", to_text(recorded, -1))
                           .end();
    opts_.sink->write_line(line);
}

void Simulation::take_snapshot()
{
    Snapshot s;
    s.time = time();
    s.beta = current_beta();
    const auto& table = network_ ? network_->plastic() : topology_.plastic;
    const std::vector<double> weights(table.weights().begin(), table.weights().end());
    s.weak_fraction = plasticity::weak_weight_fraction(weights, cfg_.harness.weak_threshold);
    s.weak_count = static_cast<std::uint64_t>(std::llround(s.weak_fraction * static_cast<double>(weights.size())));
    s.histogram = metrics::weight_histogram(weights);
    if (const std::size_t n = table.size()) {
        double sum = 0.0, sq = 0.0, gabs = 0.0, clipped = 0.0, eabs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double th = table.theta()[i];
            sum += th;
            sq += th * th;
            gabs += std::abs(table.gradient()[i]);
            clipped += std::abs(table.gradient()[i]) >= cfg_.plasticity.dtheta_max;
            eabs += std::abs(table.eligibility()[i]);
        }
        const double dn = static_cast<double>(n);
        s.theta_mean = sum / dn;
        s.theta_sd = std::sqrt(std::max(0.0, sq / dn - s.theta_mean * s.theta_mean));
        s.gradient_abs_mean = gabs / dn;
        s.gradient_clipped = clipped / dn;
        s.eligibility_abs_mean = eabs / dn;
    }
    if (opts_.sink) {
        std::string hist = "[";
        for (auto c : s.histogram) {
            if (hist.size() > 1)
                hist += ',';
            hist += std::to_string(c);
        }
        hist += ']';
        opts_.sink->write_line(line_.begin()
                                   .field("type", "snapshot")
                                   .field("t", s.time)
                                   .field("beta", s.beta)
                                   .field("weak", s.weak_fraction)
                                   .field("weak_count", s.weak_count)
                                   .field("n", static_cast<std::uint64_t>(weights.size()))
                                   .field("theta_mean", s.theta_mean)
                                   .field("theta_sd", s.theta_sd)
                                   .field("g_abs", s.gradient_abs_mean)
                                   .field("g_clipped", s.gradient_clipped)
                                   .field("e_abs", s.eligibility_abs_mean)
                                   .raw("hist", hist)
                                   .end());
    }
    record_.snapshots.push_back(std::move(s));
}

std::uint32_t Simulation::agent_step(const AgentInput& input)
{
    auto& net = *network_;
    const auto visual = topology_.population("visual");
    const auto motor = topology_.population("motor");
    for (std::size_t i = 0; i < input.visual_spikes.size(); ++i)
        if (input.visual_spikes[i])
            net.inject(visual.begin + static_cast<std::uint32_t>(i), input.visual_spikes[i]);

    std::fill(motor_window_spikes_.begin(), motor_window_spikes_.end(), 0u);
    std::uint32_t total = 0;
    const bool learn = opts_.learning;
    double checksum = 0.0;
    for (Tick f = 0; f < window_ticks_; ++f) {
        net.step_neurons(tick_, rng_network_);
        if (learn)
            checksum += learner_->fine_step(net.plastic(), net.spike_counts(), net.intensities(),
                                            plasticity::RewardSample{input.reward, tick_});
        const auto counts = net.spike_counts();
        for (std::uint32_t m = 0; m < motor.size; ++m) {
            motor_window_spikes_[m] += counts[motor.begin + m];
            total += counts[motor.begin + m];
        }
        net.propagate(tick_);
        ++tick_;
        ++record_.fine_steps;
        if (tick_ % coarse_ticks_ == 0) {
            if (learn)
                checksum += learner_->coarse_step(net.plastic(), cfg_.harness.coarse_dt, rng_plasticity_);
            ++record_.coarse_steps;
        }
        if (tick_ % anneal_ticks_ == 0)
            learner_->set_config(plasticity::anneal(cfg_.plasticity, time()));
        if (tick_ % snapshot_ticks_ == 0)
            take_snapshot();
    }
    if (!std::isfinite(checksum))
        throw RuntimeAbort("non-finite plasticity state at tick " + std::to_string(tick_),
                           diagnostic("plasticity state"));
    return total;
}

void Simulation::step_window()
{
    WindowRecord rec;
    rec.reward_applied = applied_reward_;
    env::Vec2 velocity;
    double steering = 0.0;

    if (opts_.policy == Policy::Network) {
        frame_.tick = tick_;
        if (cfg_.task == Task::Reaching)
            reaching_camera_->render(reaching_, frame_);
        else
            lane_camera_->render(lane_.pose, track_, frame_);
        events_.clear();
        vision::dvs_step(dvs_, frame_, cfg_.vision.threshold, cfg_.vision.eps, events_);
        if (opts_.events)
            vision::write_events(*opts_.events, events_);
        if (cfg_.task == Task::Reaching) {
            visual_spikes_ = vision::events_to_visual_spikes_reaching(events_, frame_.width, frame_.height);
        } else {
            visual_spikes_ = vision::events_to_visual_rates_lane(events_, frame_.width, frame_.height,
                                                                 cfg_.vision.lane_camera.window, cfg_.vision.lane_gain,
                                                                 rng_encoder_);
        }
        rec.motor_spikes = agent_step(AgentInput{visual_spikes_, applied_reward_});
        motor::update_activity(activity_, motor_window_spikes_, window_s_);
        if (cfg_.task == Task::Reaching) {
            const auto v = motor::decode_velocity(activity_.a, cfg_.decoder.velocity_gain);
            velocity = {v.vx, v.vy};
        } else {
            const auto s = motor::decode_steering(
                activity_.a, {cfg_.decoder.steering_scale, cfg_.decoder.activity_eps,
                              cfg_.decoder.first_population_negative});
            steering = s.angle;
            rec.cmd_y = s.ratio;
        }
    } else {
        if (hold_left_ == 0) {
            if (cfg_.task == Task::Reaching) {
                const double r = cfg_.harness.random_speed * std::sqrt(rng_policy_.uniform());
                const double a = 2.0 * std::numbers::pi * rng_policy_.uniform();
                random_velocity_ = {r * std::cos(a), r * std::sin(a)};
            } else {
                const auto k = static_cast<std::size_t>(rng_policy_.uniform() * motor::kSteeringCommands.size());
                random_steering_ = motor::kSteeringCommands[std::min<std::size_t>(k, 4)];
            }
            hold_left_ = hold_windows_;
        }
        --hold_left_;
        velocity = random_velocity_;
        steering = random_steering_;
        for (Tick f = 0; f < window_ticks_; ++f) {
            ++tick_;
            ++record_.fine_steps;
            if (tick_ % coarse_ticks_ == 0)
                ++record_.coarse_steps;
            if (tick_ % snapshot_ticks_ == 0)
                take_snapshot();
        }
    }

    rec.tick = tick_;
    if (cfg_.task == Task::Reaching) {
        rec.cmd_x = velocity.x;
        rec.cmd_y = velocity.y;
        const auto before = reaching_;
        const auto step = env::reaching_step(reaching_, velocity, window_s_, cfg_.reaching, rng_env_);
        rec.reward_raw = env::reaching_reward(before, step.velocity, cfg_.reaching.beta_lim, cfg_.reaching.v_lim);
        rec.err_b = env::reaching_direction_error(before.ball_pos, step.velocity);
        rec.reached = step.reached;
        rec.reset = step.reset;
        rec.err_a = env::norm(reaching_.ball_pos);
    } else {
        rec.cmd_x = steering;
        const auto step = env::lane_step(lane_, steering, window_s_, cfg_.lane, track_);
        rec.reward_raw = env::lane_reward(step.errors.beta_err, step.errors.d_err);
        rec.err_a = step.errors.d_err;
        rec.err_b = step.errors.beta_err;
        rec.reset = step.reset;
    }
    check_finite(0.0, rec);
    smooth_reward(reward_, rec.reward_raw, window_s_);
    rec.reward_smoothed = reward_.smoothed;
    applied_reward_ = reward_.smoothed;

    if (rec.reached)
        record_.reach_ticks.push_back(rec.tick);
    if (rec.reset)
        record_.reset_ticks.push_back(rec.tick);
    ++record_.windows;
    record_.ticks = tick_;
    if (opts_.keep_windows)
        record_.window_records.push_back(rec);
    emit(rec);
}

void Simulation::check_finite(double checksum, const WindowRecord& rec)
{
    const bool ok = std::isfinite(checksum) && std::isfinite(rec.reward_raw) && std::isfinite(rec.cmd_x) &&
                    std::isfinite(rec.cmd_y) && std::isfinite(rec.err_a) && std::isfinite(rec.err_b) &&
                    std::isfinite(applied_reward_);
    if (!ok)
        throw RuntimeAbort("non-finite value in the closed loop at tick " + std::to_string(rec.tick),
                           diagnostic("closed loop"));
}

std::string Simulation::diagnostic(const std::string& reason) const
{
    metrics::LineBuilder b;
    b.begin()
        .field("type", "abort")
        .field("reason", reason)
        .field("tick", static_cast<std::int64_t>(tick_))
        .field("applied_reward", applied_reward_)
        .field("smoothed_reward", reward_.smoothed)
        .field("beta", current_beta());
    if (cfg_.task == Task::Reaching)
        b.field("x", reaching_.ball_pos.x).field("y", reaching_.ball_pos.y);
    else
        b.field("x", lane_.pose.x).field("y", lane_.pose.y).field("heading", lane_.pose.heading);
    if (network_) {
        const auto& t = network_->plastic();
        std::size_t bad_theta = 0, bad_e = 0, bad_g = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            bad_theta += !std::isfinite(t.theta()[i]);
            bad_e += !std::isfinite(t.eligibility()[i]);
            bad_g += !std::isfinite(t.gradient()[i]);
        }
        std::size_t bad_membrane = 0;
        for (const auto& s : network_->states())
            bad_membrane += !std::isfinite(s.membrane);
        b.field("nonfinite_theta", static_cast<std::uint64_t>(bad_theta))
            .field("nonfinite_e", static_cast<std::uint64_t>(bad_e))
            .field("nonfinite_g", static_cast<std::uint64_t>(bad_g))
            .field("nonfinite_membrane", static_cast<std::uint64_t>(bad_membrane));
    }
    std::string a = "[";
    for (double v : activity_.a) {
        if (a.size() > 1)
            a += ',';
        a += metrics::format_double(v);
    }
    a += ']';
    b.raw("activity", a);
    return b.end();
}

void Simulation::emit(const WindowRecord& rec)
{
    if (!opts_.sink)
        return;
    line_.begin().field("w", static_cast<std::int64_t>(rec.tick));
    line_.field("r", rec.reward_raw).field("rs", rec.reward_smoothed).field("ra", rec.reward_applied);
    if (cfg_.task == Task::Reaching) {
        line_.field("vx", rec.cmd_x).field("vy", rec.cmd_y);
        line_.field("x", reaching_.ball_pos.x).field("y", reaching_.ball_pos.y);
        line_.field("dist", rec.err_a).field("berr", rec.err_b).field("reach", rec.reached);
    } else {
        line_.field("steer", rec.cmd_x).field("ratio", rec.cmd_y);
        line_.field("x", lane_.pose.x).field("y", lane_.pose.y).field("h", lane_.pose.heading);
        line_.field("d", rec.err_a).field("b", rec.err_b);
    }
    line_.field("reset", rec.reset).field("spk", static_cast<std::uint64_t>(rec.motor_spikes));
    opts_.sink->write_line(line_.end());
}

void Simulation::run(Tick until)
{
    FlushDenormals guard;
    write_header();
    if (tick_ == 0 && record_.snapshots.empty())
        take_snapshot();
    until = std::min(until, end_tick_);
    while (tick_ + window_ticks_ <= until)
        step_window();
}

void Simulation::finish()
{
    if (finished_)
        return;
    finished_ = true;
    write_header();
    if (!opts_.sink)
        return;
    std::string weak = "[";
    for (const auto& s : record_.snapshots) {
        if (weak.size() > 1)
            weak += ',';
        weak += "[" + metrics::format_double(s.time) + "," + metrics::format_double(s.weak_fraction) + "]";
    }
    weak += ']';
    line_.begin()
        .field("type", "summary")
        .field("ticks", static_cast<std::int64_t>(record_.ticks))
        .field("windows", record_.windows)
        .field("fine_steps", record_.fine_steps)
        .field("coarse_steps", record_.coarse_steps)
        .field("reaches", static_cast<std::uint64_t>(record_.reach_ticks.size()))
        .field("resets", static_cast<std::uint64_t>(record_.reset_ticks.size()));
    if (cfg_.task == Task::Reaching)
        line_.field("final_reach_rate_250s", final_reach_rate(record_));
    else
        line_.field("mean_time_on_lane_final_hour",
                    mean_time_on_lane(record_, std::max(0.0, record_.seconds() - 3600.0), record_.seconds()));
    line_.field("final_beta", current_beta()).raw("weak_fraction", weak);
    opts_.sink->write_line(line_.end());
    opts_.sink->flush();
}

// -- checkpoints ------------------------------------------------------------

std::string Simulation::serialize() const
{
    ckpt::ByteWriter w;
    w.put<std::int32_t>(opts_.policy == Policy::Network ? 0 : 1);
    w.put<std::uint8_t>(opts_.learning);
    w.put(tick_);
    put_rng(w, rng_network_);
    put_rng(w, rng_plasticity_);
    put_rng(w, rng_env_);
    put_rng(w, rng_encoder_);
    put_rng(w, rng_policy_);

    w.put<std::uint8_t>(network_ != nullptr);
    if (network_) {
        auto& net = const_cast<snn::Network&>(*network_);
        std::vector<double> membrane, rate, intensity, rise, fall;
        std::vector<std::int64_t> last;
        std::vector<std::uint8_t> has_last;
        for (const auto& s : net.states()) {
            membrane.push_back(s.membrane);
            rate.push_back(s.rate);
            intensity.push_back(s.intensity);
            rise.push_back(s.psp.rise);
            fall.push_back(s.psp.fall);
            has_last.push_back(s.last_spike_tick.has_value());
            last.push_back(s.last_spike_tick.value_or(0));
        }
        w.put_vector(membrane);
        w.put_vector(rate);
        w.put_vector(intensity);
        w.put_vector(rise);
        w.put_vector(fall);
        w.put_vector(has_last);
        w.put_vector(last);
        w.put_vector(net.queue().raw());
        w.put<std::uint64_t>(net.queue().head());
        w.put_vector(net.pending_injections());
        auto& table = net.plastic();
        using A = plasticity::TableAccess;
        w.put_vector(A::e(table));
        w.put_vector(A::g(table));
        w.put_vector(A::theta(table));
        w.put_vector(A::w(table));
        w.put_vector(A::traces(table));
        w.put_vector(A::y(table));
    }

    w.put<std::uint8_t>(dvs_.initialized);
    w.put_vector(dvs_.reference);
    w.put_vector(dvs_.last_intensity);
    w.put_vector(dvs_.last_log);

    w.put(reaching_);
    w.put(lane_);
    w.put_vector(activity_.a);
    w.put(reward_.smoothed);
    w.put(applied_reward_);
    w.put(hold_left_);
    w.put(random_velocity_);
    w.put(random_steering_);

    w.put(record_.ticks);
    w.put(record_.windows);
    w.put(record_.fine_steps);
    w.put(record_.coarse_steps);
    w.put_vector(record_.reach_ticks);
    w.put_vector(record_.reset_ticks);
    w.put<std::uint64_t>(record_.snapshots.size());
    for (const auto& s : record_.snapshots) {
        w.put(s.time);
        w.put(s.beta);
        w.put(s.weak_fraction);
        w.put(s.weak_count);
        w.put_vector(s.histogram);
        w.put(s.theta_mean);
        w.put(s.theta_sd);
        w.put(s.gradient_abs_mean);
        w.put(s.gradient_clipped);
        w.put(s.eligibility_abs_mean);
    }
    w.put_vector(record_.window_records);
    return w.bytes();
}

void Simulation::deserialize(std::string_view bytes)
{
    using ckpt::CheckpointError;
    ckpt::ByteReader r(bytes);
    const auto policy = r.get<std::int32_t>();
    const bool learning = r.get<std::uint8_t>() != 0;
    if ((policy == 0) != (opts_.policy == Policy::Network) || learning != opts_.learning)
        throw CheckpointError(CheckpointError::Kind::ConfigMismatch,
                              "checkpoint was written by a run with a different policy or learning mode");
    tick_ = r.get<Tick>();
    rng_network_.restore(r.get_string());
    rng_plasticity_.restore(r.get_string());
    rng_env_.restore(r.get_string());
    rng_encoder_.restore(r.get_string());
    rng_policy_.restore(r.get_string());

    const bool has_network = r.get<std::uint8_t>() != 0;
    if (has_network != (network_ != nullptr))
        throw CheckpointError(CheckpointError::Kind::ConfigMismatch, "checkpoint network layout differs");
    if (network_) {
        auto& net = *network_;
        const std::size_t n = net.size();
        const auto membrane = r.get_vector<double>(n);
        const auto rate = r.get_vector<double>(n);
        const auto intensity = r.get_vector<double>(n);
        const auto rise = r.get_vector<double>(n);
        const auto fall = r.get_vector<double>(n);
        const auto has_last = r.get_vector<std::uint8_t>(n);
        const auto last = r.get_vector<std::int64_t>(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = net.states()[i];
            s.membrane = membrane[i];
            s.rate = rate[i];
            s.intensity = intensity[i];
            s.psp.rise = rise[i];
            s.psp.fall = fall[i];
            s.last_spike_tick = has_last[i] ? std::optional<Tick>(last[i]) : std::nullopt;
        }
        net.queue().raw() = r.get_vector<double>(net.queue().raw().size());
        net.queue().head() = r.get<std::uint64_t>();
        net.pending_injections() = r.get_vector<std::uint32_t>(n);
        auto& table = net.plastic();
        using A = plasticity::TableAccess;
        A::e(table) = r.get_vector<double>(table.size());
        A::g(table) = r.get_vector<double>(table.size());
        A::theta(table) = r.get_vector<double>(table.size());
        A::w(table) = r.get_vector<double>(table.size());
        A::traces(table) = r.get_vector<snn::KernelFilter>(A::traces(table).size());
        A::y(table) = r.get_vector<double>(A::y(table).size());
        const Tick epochs = tick_ / anneal_ticks_;
        learner_->set_config(
            plasticity::anneal(cfg_.plasticity, static_cast<double>(epochs * anneal_ticks_) * cfg_.harness.fine_dt));
    }

    dvs_.initialized = r.get<std::uint8_t>() != 0;
    dvs_.reference = r.get_vector<double>(dvs_.reference.size());
    dvs_.last_intensity = r.get_vector<double>(dvs_.last_intensity.size());
    dvs_.last_log = r.get_vector<double>(dvs_.last_log.size());

    reaching_ = r.get<env::ReachingState>();
    lane_ = r.get<env::LaneState>();
    activity_.a = r.get_vector<double>(activity_.a.size());
    reward_.smoothed = r.get<double>();
    applied_reward_ = r.get<double>();
    hold_left_ = r.get<Tick>();
    random_velocity_ = r.get<env::Vec2>();
    random_steering_ = r.get<double>();

    record_.ticks = r.get<Tick>();
    record_.windows = r.get<std::uint64_t>();
    record_.fine_steps = r.get<std::uint64_t>();
    record_.coarse_steps = r.get<std::uint64_t>();
    record_.reach_ticks = r.get_vector<Tick>();
    record_.reset_ticks = r.get_vector<Tick>();
    const auto snaps = r.get<std::uint64_t>();
    record_.snapshots.clear();
    for (std::uint64_t i = 0; i < snaps; ++i) {
        Snapshot s;
        s.time = r.get<double>();
        s.beta = r.get<double>();
        s.weak_fraction = r.get<double>();
        s.weak_count = r.get<std::uint64_t>();
        s.histogram = r.get_vector<std::uint64_t>();
        s.theta_mean = r.get<double>();
        s.theta_sd = r.get<double>();
        s.gradient_abs_mean = r.get<double>();
        s.gradient_clipped = r.get<double>();
        s.eligibility_abs_mean = r.get<double>();
        record_.snapshots.push_back(std::move(s));
    }
    record_.window_records = r.get_vector<WindowRecord>();
    if (!r.done())
        throw CheckpointError(CheckpointError::Kind::Format, "checkpoint payload has trailing bytes");
}

void Simulation::save_checkpoint(const std::string& path) const
{
    ckpt::write_checkpoint_file(path, hash_, serialize());
}

void Simulation::load_checkpoint(const std::string& path)
{
    deserialize(ckpt::read_checkpoint_file(path, hash_));
}

// -- entry points -----------------------------------------------------------

RunRecord run_experiment(const ExperimentConfig& cfg, RunOptions opts)
{
    opts.policy = Policy::Network;
    Simulation sim(cfg, opts);
    sim.run_to_end();
    sim.finish();
    return sim.record();
}

RunRecord random_policy_baseline(const ExperimentConfig& cfg, RunOptions opts)
{
    opts.policy = Policy::Random;
    opts.learning = false;
    Simulation sim(cfg, opts);
    sim.run_to_end();
    sim.finish();
    return sim.record();
}

std::string summary_text(const RunRecord& r)
{
    std::ostringstream out;
    out << "task=" << task_name(r.task) << " seed=" << r.seed << " simulated=" << r.seconds() << "s"
        << " windows=" << r.windows << " fine_steps=" << r.fine_steps << " coarse_steps=" << r.coarse_steps << "\n";
    if (r.task == Task::Reaching) {
        out << "reaches=" << r.reach_ticks.size() << " final_reach_rate_per_250s=" << final_reach_rate(r) << "\n";
    } else {
        const double end = r.seconds();
        out << "resets=" << r.reset_ticks.size()
            << " mean_time_on_lane_final_hour=" << mean_time_on_lane(r, std::max(0.0, end - 3600.0), end) << "s\n";
    }
    out << "weak_weight_fraction:";
    for (const auto& s : r.snapshots)
        out << " t=" << s.time << ":" << s.weak_fraction;
    out << "\n";
    if (!r.snapshots.empty())
        out << "final_beta=" << r.snapshots.back().beta << "\n";
    return out.str();
}

}  // namespace spore::harness
