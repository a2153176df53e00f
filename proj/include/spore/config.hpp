#pragma once

#include "spore/environments.hpp"
#include "spore/neuron.hpp"
#include "spore/plasticity.hpp"
#include "spore/vision.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spore {

enum class Task { Reaching, Lane };

std::string_view task_name(Task t);

struct NetworkConfig {
    int motor_count = 8;
    int multiplicity = 10;          // plastic synapses per (pre, post) pair
    int synapse_delay = 1;          // ticks
    double axis_weight = 620.0;     // visual -> axis relay
    double axis_bias = -310.0;      // membrane offset of the axis relays
    double noise_rate = 35.0;       // Hz
    double noise_to_exploration = 750.0;
    double visual_to_exploration_mean = -500.0;
    double visual_to_exploration_sd = 50.0;
    double exploration_to_motor = 10.0;
    double theta_init_mean = 0.8;
    double theta_init_sd = 0.6;
};

struct VisionConfig {
    double threshold = 0.15;  // log-intensity units
    double eps = 1e-3;
    double lane_gain = 1.0;   // injected spikes per pooled event
    vision::ReachingCameraParams reaching_camera;
    vision::LaneCameraParams lane_camera;
};

struct DecoderConfig {
    double tau = 0.1;               // s
    double velocity_gain = 0.2;     // m/s per activity unit
    double steering_scale = 20.0;
    double activity_eps = 1e-6;
    bool first_population_negative = false;
};

struct HarnessConfig {
    double fine_dt = 1e-3;          // s
    double coarse_dt = 0.1;         // s
    double window = 1e-3;           // s
    double tau_r = 0.5;             // s, reward smoothing
    double snapshot_every = 600.0;  // s
    double baseline_hold = 0.1;     // s, rounded to whole windows
    double random_speed = 8.0;      // m/s, random reaching commands
    double weak_threshold = 0.07;
};

struct OutputConfig {
    std::string metrics;            // empty: no metrics stream
    std::string events;             // empty: no event dump
    double checkpoint_every = 0.0;  // s, 0 disables
    std::string checkpoint_dir = "checkpoints";
};

/// Full declarative description of a run.
struct ExperimentConfig {
    Task task = Task::Reaching;
    std::uint64_t seed = 1;
    double duration = 60.0;  // simulated seconds

    snn::NeuronParams neuron;
    NetworkConfig network;
    plasticity::PlasticityConfig plasticity;
    VisionConfig vision;
    DecoderConfig decoder;
    env::ReachingParams reaching;
    env::LaneParams lane;
    HarnessConfig harness;
    OutputConfig output;
};

/// Defaults for a task (task-dependent fields differ).
ExperimentConfig default_config(Task task);

struct ConfigIssue {
    std::string field;
    std::string message;
};

struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<ConfigIssue> errors;
    bool ok() const { return config.has_value(); }
};

/// Parses and validates config text (JSON with nested sections). Unknown keys
/// and every range or cross-field violation are reported together.
ConfigResult validate_config(std::string_view text);

/// Range and cross-field checks on an already-typed config.
std::vector<ConfigIssue> check_config(const ExperimentConfig& cfg);

/// Canonical text form; validate_config(to_text(c)) reproduces c exactly.
std::string to_text(const ExperimentConfig& cfg, int indent = 2);

/// Hash over every field that affects the simulated dynamics (excludes the
/// duration and output section). Hex string.
std::string config_hash(const ExperimentConfig& cfg);

/// Thrown by loaders when validation fails.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

ExperimentConfig parse_config_or_throw(std::string_view text);

/// One line per parameter-table row: table, row name, value, config key.
struct DefaultAuditRow {
    std::string table;
    std::string row;
    std::string value;
    std::string key;
};
std::vector<DefaultAuditRow> table_default_audit(const ExperimentConfig& cfg);

}  // namespace spore
