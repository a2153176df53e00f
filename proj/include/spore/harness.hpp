#pragma once

#include "spore/clock.hpp"
#include "spore/config.hpp"
#include "spore/decoding.hpp"
#include "spore/environments.hpp"
#include "spore/metrics.hpp"
#include "spore/network.hpp"
#include "spore/plasticity.hpp"
#include "spore/topology.hpp"
#include "spore/vision.hpp"

#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spore::harness {

struct RewardFilterState {
    double smoothed = 0.0;
    double tau_r = 0.5;  // s
};

/// smoothed <- smoothed exp(-dt/tau_r) + (1 - exp(-dt/tau_r)) raw.
/// Throws std::invalid_argument when raw < 0.
void smooth_reward(RewardFilterState& state, double raw, double dt);

/// What the network receives each window: visual injections and the scalar
/// reward. There is deliberately no episode or reset channel.
struct AgentInput {
    std::span<const std::uint32_t> visual_spikes;
    double reward = 0.0;
};

struct WindowRecord {
    Tick tick = 0;              // first tick after the window
    double reward_raw = 0.0;
    double reward_smoothed = 0.0;
    double reward_applied = 0.0;  // reward the synapses saw during this window
    double cmd_x = 0.0;         // reaching vx, lane steering angle
    double cmd_y = 0.0;         // reaching vy, lane decoder ratio
    double err_a = 0.0;         // reaching distance to goal, lane d_err
    double err_b = 0.0;         // reaching direction error, lane beta_err
    bool reached = false;
    bool reset = false;
    std::uint32_t motor_spikes = 0;
};

struct Snapshot {
    double time = 0.0;  // s
    double beta = 0.0;
    double weak_fraction = 0.0;
    std::uint64_t weak_count = 0;
    std::vector<std::uint64_t> histogram;
    double theta_mean = 0.0;
    double theta_sd = 0.0;
    double gradient_abs_mean = 0.0;
    double gradient_clipped = 0.0;  // fraction of |g| at the clip bound
    double eligibility_abs_mean = 0.0;
};

struct RunRecord {
    Task task = Task::Reaching;
    std::uint64_t seed = 0;
    std::string config_hash;
    double fine_dt = 1e-3;
    double window = 1e-3;
    Tick ticks = 0;
    std::uint64_t windows = 0;
    std::uint64_t fine_steps = 0;
    std::uint64_t coarse_steps = 0;
    std::vector<Tick> reach_ticks;
    std::vector<Tick> reset_ticks;
    std::vector<Snapshot> snapshots;
    std::vector<WindowRecord> window_records;  // only when requested

    double seconds() const { return static_cast<double>(ticks) * fine_dt; }
};

/// Reaches with tick in (t0, t1] seconds.
std::size_t reach_count(const RunRecord& r, double t0, double t1);
/// Reach counts in consecutive bins of `bin` seconds (partial last bin dropped).
std::vector<std::size_t> reach_rate_series(const RunRecord& r, double bin = 250.0);
/// Reach count over the final `bin` seconds.
double final_reach_rate(const RunRecord& r, double bin = 250.0);

struct LaneAttempt {
    double start = 0.0;
    double end = 0.0;
    bool censored = false;  // still on the lane when the run ended
    double duration() const { return end - start; }
};
std::vector<LaneAttempt> lane_attempts(const RunRecord& r);
/// Mean duration of attempts ending in (t0, t1]; the final attempt counts
/// when the run ends inside the interval. 0 when nothing qualifies.
double mean_time_on_lane(const RunRecord& r, double t0, double t1);

/// Recomputes the reach and reset aggregates from stored window records and
/// compares them with the accumulated lists.
bool aggregates_consistent(const RunRecord& r);

enum class Policy { Network, Random };

struct RunOptions {
    Policy policy = Policy::Network;
    bool learning = true;
    bool keep_windows = false;
    metrics::Sink* sink = nullptr;
    std::ostream* events = nullptr;
    std::ostream* log = nullptr;
};

/// A NaN or infinity appeared in the simulated state.
class RuntimeAbort : public std::runtime_error {
public:
    RuntimeAbort(const std::string& what, std::string diagnostic)
        : std::runtime_error(what), diagnostic_(std::move(diagnostic))
    {
    }
    const std::string& diagnostic() const { return diagnostic_; }

private:
    std::string diagnostic_;
};

/// The perception -> network -> action -> environment loop, stepped one
/// sync window at a time.
class Simulation {
public:
    Simulation(const ExperimentConfig& cfg, RunOptions opts = {});
    ~Simulation();
    Simulation(Simulation&&) noexcept;

    const ExperimentConfig& config() const { return cfg_; }
    const topo::NetworkTopology& topology() const { return topology_; }
    const snn::Network* network() const { return network_.get(); }
    snn::Network* network() { return network_.get(); }
    const RunRecord& record() const { return record_; }
    Tick now() const { return tick_; }
    double time() const { return static_cast<double>(tick_) * cfg_.harness.fine_dt; }
    Tick end_tick() const { return end_tick_; }
    double current_beta() const;
    const env::ReachingState& reaching_state() const { return reaching_; }
    const env::LaneState& lane_state() const { return lane_; }
    const motor::ActivityTrace& activity() const { return activity_; }
    double applied_reward() const { return applied_reward_; }

    /// Writes the stream header (once; run() calls it when needed).
    void write_header();
    /// Advances whole windows until the clock reaches `until` (clamped to the
    /// configured duration).
    void run(Tick until);
    void run_to_end() { run(end_tick_); }
    /// Writes the summary line and flushes the sink.
    void finish();

    void save_checkpoint(const std::string& path) const;
    /// Restores the state saved with save_checkpoint(); the config must hash
    /// equal to the one the checkpoint was written with.
    void load_checkpoint(const std::string& path);

    /// Network-facing half of one window, exposed for interface tests.
    std::uint32_t agent_step(const AgentInput& input);

private:
    void step_window();
    void take_snapshot();
    void emit(const WindowRecord& rec);
    void check_finite(double checksum, const WindowRecord& rec);
    std::string serialize() const;
    void deserialize(std::string_view bytes);
    std::string diagnostic(const std::string& reason) const;

    ExperimentConfig cfg_;
    RunOptions opts_;
    std::string hash_;

    Tick tick_ = 0;
    Tick end_tick_ = 0;
    Tick window_ticks_ = 1;
    Tick coarse_ticks_ = 100;
    Tick anneal_ticks_ = 0;
    Tick snapshot_ticks_ = 0;
    Tick hold_windows_ = 1;
    double window_s_ = 1e-3;
    bool header_written_ = false;
    bool finished_ = false;

    Rng rng_network_;
    Rng rng_plasticity_;
    Rng rng_env_;
    Rng rng_encoder_;
    Rng rng_policy_;

    topo::NetworkTopology topology_;
    std::unique_ptr<snn::Network> network_;
    std::unique_ptr<plasticity::Learner> learner_;
    std::vector<std::uint32_t> motor_window_spikes_;
    std::vector<std::uint32_t> visual_spikes_;

    vision::DvsMemory dvs_;
    vision::IntensityFrame frame_;
    std::vector<vision::AddressEvent> events_;
    std::unique_ptr<vision::ReachingCamera> reaching_camera_;
    std::unique_ptr<vision::LaneCamera> lane_camera_;

    env::ReachingState reaching_;
    env::Track track_;
    env::LaneState lane_;

    motor::ActivityTrace activity_;
    RewardFilterState reward_;
    double applied_reward_ = 0.0;
    Tick hold_left_ = 0;
    env::Vec2 random_velocity_;
    double random_steering_ = 0.0;

    RunRecord record_;
    metrics::LineBuilder line_;
};

/// Runs a whole experiment with the network policy.
RunRecord run_experiment(const ExperimentConfig& cfg, RunOptions opts = {});

/// Same loop with plasticity off and uniformly random commands held for
/// harness.baseline_hold seconds each.
RunRecord random_policy_baseline(const ExperimentConfig& cfg, RunOptions opts = {});

/// Human-readable final summary.
std::string summary_text(const RunRecord& r);

}  // namespace spore::harness
