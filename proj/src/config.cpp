#include "spore/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace spore {

using json = nlohmann::json;

std::string_view task_name(Task t) { return t == Task::Reaching ? "reaching" : "lane"; }

ExperimentConfig default_config(Task task)
{
    ExperimentConfig cfg;
    cfg.task = task;
    if (task == Task::Lane) {
        cfg.network.multiplicity = 1;
        cfg.plasticity.tau_e = 2.0;
    }
    return cfg;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& i : issues)
              msg += "\n  " + i.field + ": " + i.message;
          return msg;
      }()),
      issues_(std::move(issues))
{
}

namespace {

using Errors = std::vector<ConfigIssue>;

/// Key table of one config section: typed read and write of each member.
template <typename T>
class Section {
public:
    template <typename M>
    Section& field(std::string key, M T::*member)
    {
        setters_[key] = [member, key](T& obj, const json& j, const std::string& path, Errors& errs) {
            read_value(obj.*member, j, path + key, errs);
        };
        order_.push_back(key);
        getters_[key] = [member](const T& obj) { return json(obj.*member); };
        return *this;
    }

    void read(T& obj, const json& j, const std::string& path, Errors& errs) const
    {
        if (!j.is_object()) {
            errs.push_back({path.empty() ? "<root>" : path.substr(0, path.size() - 1),
                            "expected an object"});
            return;
        }
        for (const auto& [key, value] : j.items()) {
            auto it = setters_.find(key);
            if (it == setters_.end()) {
                errs.push_back({path + key, "unknown key"});
                continue;
            }
            it->second(obj, value, path, errs);
        }
    }

    json write(const T& obj) const
    {
        json out = json::object();
        for (const auto& key : order_)
            out[key] = getters_.at(key)(obj);
        return out;
    }

private:
    static void read_value(double& dst, const json& j, const std::string& path, Errors& errs)
    {
        if (!j.is_number())
            errs.push_back({path, "expected a number"});
        else
            dst = j.get<double>();
    }
    static void read_value(int& dst, const json& j, const std::string& path, Errors& errs)
    {
        if (!j.is_number_integer())
            errs.push_back({path, "expected an integer"});
        else
            dst = j.get<int>();
    }
    static void read_value(bool& dst, const json& j, const std::string& path, Errors& errs)
    {
        if (!j.is_boolean())
            errs.push_back({path, "expected true or false"});
        else
            dst = j.get<bool>();
    }
    static void read_value(std::string& dst, const json& j, const std::string& path, Errors& errs)
    {
        if (!j.is_string())
            errs.push_back({path, "expected a string"});
        else
            dst = j.get<std::string>();
    }

    std::map<std::string, std::function<void(T&, const json&, const std::string&, Errors&)>> setters_;
    std::map<std::string, std::function<json(const T&)>> getters_;
    std::vector<std::string> order_;
};

const Section<snn::NeuronParams>& neuron_section()
{
    static const auto s = Section<snn::NeuronParams>{}
                              .field("rate_scale", &snn::NeuronParams::rate_scale)
                              .field("sensitivity", &snn::NeuronParams::sensitivity)
                              .field("rate_max", &snn::NeuronParams::rate_max)
                              .field("refractory", &snn::NeuronParams::refractory)
                              .field("tau_rise", &snn::NeuronParams::tau_rise)
                              .field("tau_fall", &snn::NeuronParams::tau_fall);
    return s;
}

const Section<NetworkConfig>& network_section()
{
    static const auto s = Section<NetworkConfig>{}
                              .field("motor_count", &NetworkConfig::motor_count)
                              .field("multiplicity", &NetworkConfig::multiplicity)
                              .field("synapse_delay", &NetworkConfig::synapse_delay)
                              .field("axis_weight", &NetworkConfig::axis_weight)
                              .field("axis_bias", &NetworkConfig::axis_bias)
                              .field("noise_rate", &NetworkConfig::noise_rate)
                              .field("noise_to_exploration", &NetworkConfig::noise_to_exploration)
                              .field("visual_to_exploration_mean", &NetworkConfig::visual_to_exploration_mean)
                              .field("visual_to_exploration_sd", &NetworkConfig::visual_to_exploration_sd)
                              .field("exploration_to_motor", &NetworkConfig::exploration_to_motor)
                              .field("theta_init_mean", &NetworkConfig::theta_init_mean)
                              .field("theta_init_sd", &NetworkConfig::theta_init_sd);
    return s;
}

const Section<plasticity::PlasticityConfig>& plasticity_section()
{
    using P = plasticity::PlasticityConfig;
    static const auto s = Section<P>{}
                              .field("beta", &P::beta)
                              .field("lambda", &P::lambda)
                              .field("temperature", &P::temperature)
                              .field("c_p", &P::c_p)
                              .field("c_g", &P::c_g)
                              .field("mu", &P::mu)
                              .field("tau_e", &P::tau_e)
                              .field("tau_g", &P::tau_g)
                              .field("theta_min", &P::theta_min)
                              .field("theta_max", &P::theta_max)
                              .field("dtheta_max", &P::dtheta_max)
                              .field("w0", &P::w0)
                              .field("theta0", &P::theta0)
                              .field("mult", &P::mult)
                              .field("anneal_interval", &P::anneal_interval)
                              .field("beta_time_unit", &P::beta_time_unit);
    return s;
}

const Section<vision::ReachingCameraParams>& reaching_camera_section()
{
    using C = vision::ReachingCameraParams;
    static const auto s = Section<C>{}
                              .field("width", &C::width)
                              .field("height", &C::height)
                              .field("ball_intensity", &C::ball_intensity)
                              .field("plane_intensity", &C::plane_intensity);
    return s;
}

const Section<vision::LaneCameraParams>& lane_camera_section()
{
    using C = vision::LaneCameraParams;
    static const auto s = Section<C>{}
                              .field("width", &C::width)
                              .field("height", &C::height)
                              .field("window", &C::window)
                              .field("mount_height", &C::mount_height)
                              .field("pitch", &C::pitch)
                              .field("hfov", &C::hfov)
                              .field("road_intensity", &C::road_intensity)
                              .field("marking_intensity", &C::marking_intensity)
                              .field("ground_intensity", &C::ground_intensity)
                              .field("sky_intensity", &C::sky_intensity)
                              .field("marking_width", &C::marking_width)
                              .field("dash_length", &C::dash_length)
                              .field("raster_cell", &C::raster_cell);
    return s;
}

const Section<VisionConfig>& vision_section()
{
    static const auto s = Section<VisionConfig>{}
                              .field("threshold", &VisionConfig::threshold)
                              .field("eps", &VisionConfig::eps)
                              .field("lane_gain", &VisionConfig::lane_gain);
    return s;
}

const Section<DecoderConfig>& decoder_section()
{
    static const auto s = Section<DecoderConfig>{}
                              .field("tau", &DecoderConfig::tau)
                              .field("velocity_gain", &DecoderConfig::velocity_gain)
                              .field("steering_scale", &DecoderConfig::steering_scale)
                              .field("activity_eps", &DecoderConfig::activity_eps)
                              .field("first_population_negative", &DecoderConfig::first_population_negative);
    return s;
}

const Section<env::ReachingParams>& reaching_section()
{
    using R = env::ReachingParams;
    static const auto s = Section<R>{}
                              .field("plane_size", &R::plane_size)
                              .field("ball_radius", &R::ball_radius)
                              .field("goal_radius", &R::goal_radius)
                              .field("reset_clearance", &R::reset_clearance)
                              .field("beta_lim", &R::beta_lim)
                              .field("v_lim", &R::v_lim);
    return s;
}

const Section<env::LaneParams>& lane_section()
{
    using L = env::LaneParams;
    static const auto s = Section<L>{}
                              .field("straight", &L::straight)
                              .field("radius", &L::radius)
                              .field("lane_width", &L::lane_width)
                              .field("margin", &L::margin)
                              .field("linear_speed", &L::linear_speed)
                              .field("wheelbase", &L::wheelbase)
                              .field("start_s", &L::start_s);
    return s;
}

const Section<HarnessConfig>& harness_section()
{
    static const auto s = Section<HarnessConfig>{}
                              .field("fine_dt", &HarnessConfig::fine_dt)
                              .field("coarse_dt", &HarnessConfig::coarse_dt)
                              .field("window", &HarnessConfig::window)
                              .field("tau_r", &HarnessConfig::tau_r)
                              .field("snapshot_every", &HarnessConfig::snapshot_every)
                              .field("baseline_hold", &HarnessConfig::baseline_hold)
                              .field("random_speed", &HarnessConfig::random_speed)
                              .field("weak_threshold", &HarnessConfig::weak_threshold);
    return s;
}

const Section<OutputConfig>& output_section()
{
    static const auto s = Section<OutputConfig>{}
                              .field("metrics", &OutputConfig::metrics)
                              .field("events", &OutputConfig::events)
                              .field("checkpoint_every", &OutputConfig::checkpoint_every)
                              .field("checkpoint_dir", &OutputConfig::checkpoint_dir);
    return s;
}

json to_json(const ExperimentConfig& c)
{
    json j;
    j["task"] = std::string(task_name(c.task));
    j["seed"] = c.seed;
    j["duration"] = c.duration;
    j["neuron"] = neuron_section().write(c.neuron);
    j["network"] = network_section().write(c.network);
    j["plasticity"] = plasticity_section().write(c.plasticity);
    j["vision"] = vision_section().write(c.vision);
    j["vision"]["reaching_camera"] = reaching_camera_section().write(c.vision.reaching_camera);
    j["vision"]["lane_camera"] = lane_camera_section().write(c.vision.lane_camera);
    j["decoder"] = decoder_section().write(c.decoder);
    j["reaching"] = reaching_section().write(c.reaching);
    j["lane"] = lane_section().write(c.lane);
    j["harness"] = harness_section().write(c.harness);
    j["output"] = output_section().write(c.output);
    return j;
}

void read_json(ExperimentConfig& c, const json& j, Errors& errs)
{
    static const std::vector<std::string> top_keys{"task",   "seed",     "duration", "neuron",
                                                   "network", "plasticity", "vision", "decoder",
                                                   "reaching", "lane",    "harness",  "output"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(top_keys.begin(), top_keys.end(), key) == top_keys.end())
            errs.push_back({key, "unknown key"});
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
            errs.push_back({"seed", "expected a non-negative integer"});
        else
            c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("duration")) {
        if (!j["duration"].is_number())
            errs.push_back({"duration", "expected a number"});
        else
            c.duration = j["duration"].get<double>();
    }
    if (j.contains("neuron"))
        neuron_section().read(c.neuron, j["neuron"], "neuron.", errs);
    if (j.contains("network"))
        network_section().read(c.network, j["network"], "network.", errs);
    if (j.contains("plasticity"))
        plasticity_section().read(c.plasticity, j["plasticity"], "plasticity.", errs);
    if (j.contains("vision")) {
        json v = j["vision"];
        if (v.is_object()) {
            if (v.contains("reaching_camera")) {
                reaching_camera_section().read(c.vision.reaching_camera, v["reaching_camera"],
                                               "vision.reaching_camera.", errs);
                v.erase("reaching_camera");
            }
            if (v.contains("lane_camera")) {
                lane_camera_section().read(c.vision.lane_camera, v["lane_camera"],
                                           "vision.lane_camera.", errs);
                v.erase("lane_camera");
            }
        }
        vision_section().read(c.vision, v, "vision.", errs);
    }
    if (j.contains("decoder"))
        decoder_section().read(c.decoder, j["decoder"], "decoder.", errs);
    if (j.contains("reaching"))
        reaching_section().read(c.reaching, j["reaching"], "reaching.", errs);
    if (j.contains("lane"))
        lane_section().read(c.lane, j["lane"], "lane.", errs);
    if (j.contains("harness"))
        harness_section().read(c.harness, j["harness"], "harness.", errs);
    if (j.contains("output"))
        output_section().read(c.output, j["output"], "output.", errs);
}

struct Checker {
    Errors errs;

    void require(bool ok, std::string field, std::string message)
    {
        if (!ok)
            errs.push_back({std::move(field), std::move(message)});
    }
    void positive(double v, const std::string& field)
    {
        require(std::isfinite(v) && v > 0.0, field, "must be positive");
    }
    void non_negative(double v, const std::string& field)
    {
        require(std::isfinite(v) && v >= 0.0, field, "must be non-negative");
    }
    void finite(double v, const std::string& field)
    {
        require(std::isfinite(v), field, "must be finite");
    }
};

}  // namespace

std::vector<ConfigIssue> check_config(const ExperimentConfig& c)
{
    Checker k;
    k.non_negative(c.duration, "duration");

    const auto& n = c.neuron;
    k.positive(n.rate_scale, "neuron.rate_scale");
    k.positive(n.sensitivity, "neuron.sensitivity");
    k.positive(n.rate_max, "neuron.rate_max");
    k.non_negative(n.refractory, "neuron.refractory");
    k.positive(n.tau_rise, "neuron.tau_rise");
    k.require(n.tau_rise < n.tau_fall, "neuron.tau_rise, neuron.tau_fall", "tau_rise must be below tau_fall");

    const auto& net = c.network;
    k.require(net.motor_count >= 2 && net.motor_count % 2 == 0, "network.motor_count",
              "must be an even number >= 2");
    k.require(net.multiplicity >= 1, "network.multiplicity", "must be at least 1");
    k.require(net.synapse_delay >= 1 && net.synapse_delay <= 1000, "network.synapse_delay",
              "must be between 1 and 1000 ticks");
    k.finite(net.axis_weight, "network.axis_weight");
    k.finite(net.axis_bias, "network.axis_bias");
    k.non_negative(net.noise_rate, "network.noise_rate");
    k.finite(net.noise_to_exploration, "network.noise_to_exploration");
    k.finite(net.visual_to_exploration_mean, "network.visual_to_exploration_mean");
    k.non_negative(net.visual_to_exploration_sd, "network.visual_to_exploration_sd");
    k.finite(net.exploration_to_motor, "network.exploration_to_motor");
    k.finite(net.theta_init_mean, "network.theta_init_mean");
    k.non_negative(net.theta_init_sd, "network.theta_init_sd");

    const auto& p = c.plasticity;
    k.positive(p.beta, "plasticity.beta");
    k.non_negative(p.lambda, "plasticity.lambda");
    k.non_negative(p.temperature, "plasticity.temperature");
    k.non_negative(p.c_p, "plasticity.c_p");
    k.finite(p.c_g, "plasticity.c_g");
    k.finite(p.mu, "plasticity.mu");
    k.positive(p.tau_e, "plasticity.tau_e");
    k.positive(p.tau_g, "plasticity.tau_g");
    k.require(std::isfinite(p.theta_min) && std::isfinite(p.theta_max) && p.theta_min < p.theta_max,
              "plasticity.theta_min, plasticity.theta_max", "theta_min must be below theta_max");
    k.positive(p.dtheta_max, "plasticity.dtheta_max");
    k.positive(p.w0, "plasticity.w0");
    k.finite(p.theta0, "plasticity.theta0");
    k.positive(p.mult, "plasticity.mult");
    k.positive(p.beta_time_unit, "plasticity.beta_time_unit");
    k.positive(p.anneal_interval, "plasticity.anneal_interval");

    const auto& v = c.vision;
    k.positive(v.threshold, "vision.threshold");
    k.positive(v.eps, "vision.eps");
    k.non_negative(v.lane_gain, "vision.lane_gain");
    k.require(v.reaching_camera.width > 0 && v.reaching_camera.height > 0, "vision.reaching_camera",
              "resolution must be positive");
    const auto& lc = v.lane_camera;
    k.require(lc.width > 0 && lc.height > 0, "vision.lane_camera", "resolution must be positive");
    k.require(lc.window > 0 && lc.width % std::max(lc.window, 1) == 0 && lc.height % std::max(lc.window, 1) == 0,
              "vision.lane_camera.window", "must tile the lane camera");
    k.positive(lc.mount_height, "vision.lane_camera.mount_height");
    k.require(lc.raster_cell >= 0.0 && lc.raster_cell <= lc.marking_width / 2.0, "vision.lane_camera.raster_cell",
              "must lie in [0, marking_width / 2]");
    k.require(lc.hfov > 0.0 && lc.hfov < 180.0, "vision.lane_camera.hfov", "must be in (0, 180)");
    for (double i : {v.reaching_camera.ball_intensity, v.reaching_camera.plane_intensity, lc.road_intensity,
                     lc.marking_intensity, lc.ground_intensity, lc.sky_intensity})
        k.require(i >= 0.0 && i <= 1.0, "vision", "intensities must lie in [0, 1]");

    const auto& d = c.decoder;
    k.positive(d.tau, "decoder.tau");
    k.finite(d.velocity_gain, "decoder.velocity_gain");
    k.positive(d.steering_scale, "decoder.steering_scale");
    k.positive(d.activity_eps, "decoder.activity_eps");

    const auto& r = c.reaching;
    k.positive(r.plane_size, "reaching.plane_size");
    k.positive(r.ball_radius, "reaching.ball_radius");
    k.require(r.ball_radius < r.plane_size / 2.0, "reaching.ball_radius", "ball must fit on the plane");
    k.positive(r.goal_radius, "reaching.goal_radius");
    k.non_negative(r.reset_clearance, "reaching.reset_clearance");
    k.require((r.goal_radius + r.reset_clearance) < (r.plane_size / 2.0 - r.ball_radius) * std::sqrt(2.0),
              "reaching.reset_clearance", "leaves no room for resets");
    k.require(r.beta_lim > 0.0 && r.beta_lim <= 180.0, "reaching.beta_lim", "must be in (0, 180]");
    k.non_negative(r.v_lim, "reaching.v_lim");

    const auto& l = c.lane;
    k.positive(l.straight, "lane.straight");
    k.positive(l.radius, "lane.radius");
    k.positive(l.lane_width, "lane.lane_width");
    k.require(l.radius > 1.5 * l.lane_width, "lane.radius", "must exceed the road width");
    k.non_negative(l.margin, "lane.margin");
    k.non_negative(l.linear_speed, "lane.linear_speed");
    k.positive(l.wheelbase, "lane.wheelbase");
    k.finite(l.start_s, "lane.start_s");

    const auto& h = c.harness;
    k.positive(h.fine_dt, "harness.fine_dt");
    k.require(h.coarse_dt > 0.0 && is_multiple(h.coarse_dt, h.fine_dt), "harness.coarse_dt",
              "must be a positive multiple of harness.fine_dt");
    k.require(h.window >= 1e-3 - 1e-12 && h.window <= 3e-3 + 1e-12, "harness.window",
              "must lie in [1 ms, 3 ms]");
    k.require(is_multiple(h.window, h.fine_dt), "harness.window", "must be a multiple of harness.fine_dt");
    k.require(is_multiple(p.anneal_interval, h.fine_dt), "plasticity.anneal_interval",
              "must be a multiple of harness.fine_dt");
    k.positive(h.tau_r, "harness.tau_r");
    k.positive(h.snapshot_every, "harness.snapshot_every");
    k.require(h.baseline_hold >= h.window, "harness.baseline_hold", "must be at least one harness.window");
    k.positive(h.weak_threshold, "harness.weak_threshold");
    k.non_negative(h.random_speed, "harness.random_speed");
    k.require(h.window > 0.0 && is_multiple(c.duration, h.window), "duration",
              "must be a multiple of harness.window");

    k.non_negative(c.output.checkpoint_every, "output.checkpoint_every");
    if (c.output.checkpoint_every > 0.0)
        k.require(is_multiple(c.output.checkpoint_every, h.window), "output.checkpoint_every",
                  "must be a multiple of harness.window");
    return k.errs;
}

ConfigResult validate_config(std::string_view text)
{
    ConfigResult result;
    json j = json::object();
    const bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
    if (!blank) {
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            result.errors.push_back({"<root>", std::string("parse error: ") + e.what()});
            return result;
        }
    }
    if (!j.is_object()) {
        result.errors.push_back({"<root>", "expected an object"});
        return result;
    }
    Task task = Task::Reaching;
    if (j.contains("task")) {
        const auto& t = j["task"];
        if (t == "reaching")
            task = Task::Reaching;
        else if (t == "lane")
            task = Task::Lane;
        else
            result.errors.push_back({"task", "must be \"reaching\" or \"lane\""});
    }
    ExperimentConfig cfg = default_config(task);
    read_json(cfg, j, result.errors);
    auto range = check_config(cfg);
    result.errors.insert(result.errors.end(), range.begin(), range.end());
    if (result.errors.empty())
        result.config = cfg;
    return result;
}

ExperimentConfig parse_config_or_throw(std::string_view text)
{
    auto r = validate_config(text);
    if (!r.ok())
        throw ConfigError(r.errors);
    return *r.config;
}

std::string to_text(const ExperimentConfig& cfg, int indent) { return to_json(cfg).dump(indent); }

std::string config_hash(const ExperimentConfig& cfg)
{
    json j = to_json(cfg);
    j.erase("duration");
    j.erase("output");
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << fnv1a64(j.dump());
    return out.str();
}

namespace {
std::string num(double v)
{
    std::ostringstream out;
    out << v;
    std::string s = out.str();
    for (auto pos = s.find("e-0"); pos != std::string::npos; pos = s.find("e-0"))
        s.erase(pos + 2, 1);
    return s;
}

/// Integral values keep one decimal, as the tables print them.
std::string num1(double v)
{
    std::string s = num(v);
    if (s.find_first_of(".e") == std::string::npos)
        s += ".0";
    return s;
}
}  // namespace

std::vector<DefaultAuditRow> table_default_audit(const ExperimentConfig& c)
{
    const auto& p = c.plasticity;
    const auto& n = c.network;
    return {
        {"NEST Parameters", "time-step/resolution", num(c.harness.fine_dt * 1e3) + " ms", "harness.fine_dt"},
        {"NEST Parameters", "synapse update interval", num(c.harness.coarse_dt * 1e3) + " ms", "harness.coarse_dt"},
        {"NEST Parameters", "(reaching) exploration noise", num(n.noise_rate) + " Hz", "network.noise_rate"},
        {"NEST Parameters", "(reaching) noise to exploration exc.", num1(n.noise_to_exploration), "network.noise_to_exploration"},
        {"NEST Parameters", "(reaching) visual to exploration inh.",
         "N(" + num(n.visual_to_exploration_mean) + ", " + num(n.visual_to_exploration_sd) + ")",
         "network.visual_to_exploration_mean/sd"},
        {"NEST Parameters", "(reaching) exploration to motor exc.", num1(n.exploration_to_motor), "network.exploration_to_motor"},
        {"SPORE Parameters", "visual to motor exc.",
         "N(" + num(n.theta_init_mean) + ", " + num(n.theta_init_sd) + ") (clipped at 0)",
         "network.theta_init_mean/sd"},
        {"SPORE Parameters", "visual to motor mul.", num(p.mult), "plasticity.mult"},
        {"SPORE Parameters", "temperature (T)", num(p.temperature), "plasticity.temperature"},
        {"SPORE Parameters", "initial learning rate (beta)", num(p.beta), "plasticity.beta"},
        {"SPORE Parameters", "learning rate decay (lambda)", num(p.lambda), "plasticity.lambda"},
        {"SPORE Parameters", "integration time", num(p.tau_g) + " s", "plasticity.tau_g"},
        {"SPORE Parameters", "max synaptic parameter (theta_max)", num1(p.theta_max), "plasticity.theta_max"},
        {"SPORE Parameters", "min synaptic parameter (theta_min)", num1(p.theta_min), "plasticity.theta_min"},
        {"SPORE Parameters", "(reaching) episode length", num(default_config(Task::Reaching).plasticity.tau_e) + " s",
         "plasticity.tau_e (task=reaching)"},
        {"SPORE Parameters", "(lane following) episode length", num(default_config(Task::Lane).plasticity.tau_e) + " s",
         "plasticity.tau_e (task=lane)"},
        {"ROS-MUSIC Parameters", "MUSIC time-step", num(c.harness.window * 1e3) + " ms (allowed 1 ms...3 ms)", "harness.window"},
        {"ROS-MUSIC Parameters", "DVS adapter time-step", num(c.harness.window * 1e3) + " ms", "harness.window"},
        {"ROS-MUSIC Parameters", "decoder time constant", num(c.decoder.tau * 1e3) + " ms", "decoder.tau"},
    };
}

}  // namespace spore
