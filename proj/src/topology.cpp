#include "spore/topology.hpp"

#include <cstring>
#include <sstream>
#include <stdexcept>

namespace spore::topo {

bool NetworkTopology::has(const std::string& name) const
{
    for (const auto& p : populations)
        if (p.name == name)
            return true;
    return false;
}

const Population& NetworkTopology::population(const std::string& name) const
{
    for (const auto& p : populations)
        if (p.name == name)
            return p;
    throw std::out_of_range("no population named " + name);
}

namespace {

class Builder {
public:
    Population add(std::string name, std::uint32_t size, snn::NeuronKind kind, double rate = 0.0,
                   double bias = 0.0)
    {
        Population p{std::move(name), static_cast<std::uint32_t>(top.neurons.size()), size};
        for (std::uint32_t i = 0; i < size; ++i) {
            top.neurons.kinds.push_back(kind);
            top.neurons.poisson_rate.push_back(rate);
            top.neurons.bias.push_back(bias);
        }
        top.populations.push_back(p);
        return p;
    }

    void alias(std::string name, std::uint32_t begin, std::uint32_t size)
    {
        top.populations.push_back({std::move(name), begin, size});
    }

    void connect_static(std::uint32_t source, std::uint32_t target, double weight, std::uint32_t delay)
    {
        top.static_synapses.push_back({source, target, weight, delay});
    }

    NetworkTopology top;
};

Population add_motors(Builder& b, int count)
{
    const auto motor = b.add("motor", static_cast<std::uint32_t>(count), snn::NeuronKind::Stochastic);
    const auto half = motor.size / 2;
    b.alias("motor_left", motor.begin, half);
    b.alias("motor_right", motor.begin + half, motor.size - half);
    return motor;
}

/// All-to-all plastic wiring from each source population to `motor`,
/// `multiplicity` synapses per pair, theta ~ N(mean, sd) clipped at zero.
plasticity::SynapseTable connect_plastic(const std::vector<Population>& sources, const Population& motor,
                                         const ExperimentConfig& cfg, Rng& rng)
{
    std::vector<plasticity::SynapseTable::Entry> entries;
    const auto& net = cfg.network;
    for (const auto& pop : sources)
        for (std::uint32_t s = pop.begin; s < pop.end(); ++s)
            for (std::uint32_t t = motor.begin; t < motor.end(); ++t)
                for (int m = 0; m < net.multiplicity; ++m) {
                    const double theta = std::max(0.0, rng.normal(net.theta_init_mean, net.theta_init_sd));
                    entries.push_back({s, t, theta});
                }
    return plasticity::SynapseTable(entries, cfg.plasticity, static_cast<std::uint32_t>(net.synapse_delay));
}

}  // namespace

NetworkTopology build_reaching_network(const ExperimentConfig& cfg, Rng& rng)
{
    const int w = cfg.vision.reaching_camera.width;
    const int h = cfg.vision.reaching_camera.height;
    const auto& net = cfg.network;
    const auto delay = static_cast<std::uint32_t>(net.synapse_delay);

    Builder b;
    b.top.task = Task::Reaching;
    b.top.grid_width = w;
    b.top.grid_height = h;
    b.top.multiplicity = net.multiplicity;

    const auto visual = b.add("visual", static_cast<std::uint32_t>(w * h), snn::NeuronKind::Source);
    const auto rows = b.add("axis_row", static_cast<std::uint32_t>(h), snn::NeuronKind::Stochastic, 0.0, net.axis_bias);
    const auto cols = b.add("axis_col", static_cast<std::uint32_t>(w), snn::NeuronKind::Stochastic, 0.0, net.axis_bias);
    const auto noise = b.add("noise", 1, snn::NeuronKind::PoissonSource, net.noise_rate);
    const auto explore = b.add("exploration", 1, snn::NeuronKind::Stochastic);
    const auto motor = add_motors(b, net.motor_count);

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const auto v = visual.begin + static_cast<std::uint32_t>(y * w + x);
            b.connect_static(v, rows.begin + static_cast<std::uint32_t>(y), net.axis_weight, delay);
            b.connect_static(v, cols.begin + static_cast<std::uint32_t>(x), net.axis_weight, delay);
        }
    b.connect_static(noise.begin, explore.begin, net.noise_to_exploration, delay);
    for (auto v = visual.begin; v < visual.end(); ++v)
        b.connect_static(v, explore.begin,
                         rng.normal(net.visual_to_exploration_mean, net.visual_to_exploration_sd), delay);
    for (auto m = motor.begin; m < motor.end(); ++m)
        b.connect_static(explore.begin, m, net.exploration_to_motor, delay);

    b.top.plastic = connect_plastic({visual, rows, cols}, motor, cfg, rng);
    return std::move(b.top);
}

NetworkTopology build_lane_network(const ExperimentConfig& cfg, Rng& rng)
{
    const auto& cam = cfg.vision.lane_camera;
    const int w = cam.width / cam.window;
    const int h = cam.height / cam.window;

    Builder b;
    b.top.task = Task::Lane;
    b.top.grid_width = w;
    b.top.grid_height = h;
    b.top.multiplicity = cfg.network.multiplicity;

    const auto visual = b.add("visual", static_cast<std::uint32_t>(w * h), snn::NeuronKind::Source);
    const auto motor = add_motors(b, cfg.network.motor_count);
    b.top.plastic = connect_plastic({visual}, motor, cfg, rng);
    return std::move(b.top);
}

NetworkTopology build_network(const ExperimentConfig& cfg, Rng& rng)
{
    return cfg.task == Task::Reaching ? build_reaching_network(cfg, rng) : build_lane_network(cfg, rng);
}

std::size_t expected_plastic_count(const ExperimentConfig& cfg)
{
    const auto motors = static_cast<std::size_t>(cfg.network.motor_count);
    const auto m = static_cast<std::size_t>(cfg.network.multiplicity);
    if (cfg.task == Task::Reaching) {
        const auto w = static_cast<std::size_t>(cfg.vision.reaching_camera.width);
        const auto h = static_cast<std::size_t>(cfg.vision.reaching_camera.height);
        return (w * h + w + h) * motors * m;
    }
    const auto& cam = cfg.vision.lane_camera;
    return static_cast<std::size_t>((cam.width / cam.window) * (cam.height / cam.window)) * motors * m;
}

double weak_weight_fraction(const NetworkTopology& top, double threshold)
{
    return plasticity::weak_weight_fraction(top.plastic.weights(), threshold);
}

std::vector<std::string> audit_connectivity(const NetworkTopology& top)
{
    std::vector<std::string> issues;
    const auto& motor = top.population("motor");
    std::vector<const Population*> allowed{&top.population("visual")};
    if (top.task == Task::Reaching) {
        allowed.push_back(&top.population("axis_row"));
        allowed.push_back(&top.population("axis_col"));
    }
    const auto sources = top.plastic.sources();
    const auto targets = top.plastic.targets();
    for (std::size_t i = 0; i < top.plastic.size(); ++i) {
        bool ok = false;
        for (const auto* p : allowed)
            ok = ok || p->contains(sources[i]);
        if (!ok)
            issues.push_back("plastic synapse " + std::to_string(i) + " has a non-visual source");
        if (!motor.contains(targets[i]))
            issues.push_back("plastic synapse " + std::to_string(i) + " targets a non-motor neuron");
        if (sources[i] == targets[i])
            issues.push_back("plastic synapse " + std::to_string(i) + " is a self-loop");
        if (top.has("exploration") && top.population("exploration").contains(sources[i]))
            issues.push_back("exploration neuron has plastic output");
    }
    for (const auto& s : top.static_synapses)
        if (s.source == s.target)
            issues.push_back("static self-loop on neuron " + std::to_string(s.source));
    return issues;
}

namespace {
template <typename T>
std::uint64_t mix(std::uint64_t h, const T& v)
{
    char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    return fnv1a64(std::string_view(bytes, sizeof(T)), h);
}
}  // namespace

TopologySummary summarize(const NetworkTopology& top)
{
    TopologySummary s;
    s.neurons = top.neuron_count();
    s.static_synapses = top.static_synapses.size();
    s.plastic_synapses = top.plastic.size();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& syn : top.static_synapses) {
        h = mix(h, syn.source);
        h = mix(h, syn.target);
        h = mix(h, syn.weight);
        h = mix(h, syn.delay);
    }
    s.static_checksum = h;
    h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < top.plastic.size(); ++i) {
        h = mix(h, top.plastic.sources()[i]);
        h = mix(h, top.plastic.targets()[i]);
        h = mix(h, top.plastic.theta()[i]);
    }
    s.plastic_checksum = h;
    s.paper_scale = top.task == Task::Reaching ? s.plastic_synapses == 23040 : s.plastic_synapses == 512;
    return s;
}

std::string describe(const NetworkTopology& top)
{
    const auto s = summarize(top);
    std::ostringstream out;
    out << "topology task=" << task_name(top.task) << " grid=" << top.grid_width << "x" << top.grid_height
        << " neurons=" << s.neurons << " static=" << s.static_synapses << " plastic=" << s.plastic_synapses
        << " multiplicity=" << top.multiplicity << std::hex << " static_fnv=" << s.static_checksum
        << " plastic_fnv=" << s.plastic_checksum << std::dec
        << (s.paper_scale ? "" : " variant=scaled");
    for (const auto& p : top.populations)
        out << " " << p.name << "=[" << p.begin << "," << p.end() << ")";
    return out.str();
}

}  // namespace spore::topo
