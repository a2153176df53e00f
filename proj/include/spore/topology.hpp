#pragma once

#include "spore/config.hpp"
#include "spore/network.hpp"
#include "spore/plasticity.hpp"
#include "spore/rng.hpp"

#include <string>
#include <vector>

namespace spore::topo {

/// Contiguous range of neuron ids.
struct Population {
    std::string name;
    std::uint32_t begin = 0;
    std::uint32_t size = 0;
    std::uint32_t end() const { return begin + size; }
    bool contains(std::uint32_t id) const { return id >= begin && id < end(); }
};

struct NetworkTopology {
    Task task = Task::Reaching;
    int grid_width = 0;   // visual neurons per row
    int grid_height = 0;  // visual neuron rows
    int multiplicity = 1;
    std::vector<Population> populations;
    snn::NeuronTable neurons;
    std::vector<snn::StaticSynapse> static_synapses;
    plasticity::SynapseTable plastic;

    bool has(const std::string& name) const;
    /// Throws std::out_of_range for unknown names.
    const Population& population(const std::string& name) const;
    std::size_t neuron_count() const { return neurons.size(); }
};

/// Visual neurons one per camera pixel, one axis relay per pixel row and
/// column, a Poisson noise source driving an exploration neuron that is
/// inhibited by the visual layer and excites every motor neuron, and plastic
/// all-to-all visual+axis -> motor connections.
NetworkTopology build_reaching_network(const ExperimentConfig& cfg, Rng& rng);

/// One visual neuron per pooling window of the lane camera and plastic
/// all-to-all visual -> motor connections; motors split into left and right.
NetworkTopology build_lane_network(const ExperimentConfig& cfg, Rng& rng);

NetworkTopology build_network(const ExperimentConfig& cfg, Rng& rng);

/// Plastic synapse count implied by the config, without building.
std::size_t expected_plastic_count(const ExperimentConfig& cfg);

double weak_weight_fraction(const NetworkTopology& top, double threshold);

/// Violations of the wiring rules (empty when the topology is sound).
std::vector<std::string> audit_connectivity(const NetworkTopology& top);

struct TopologySummary {
    std::size_t neurons = 0;
    std::size_t static_synapses = 0;
    std::size_t plastic_synapses = 0;
    std::uint64_t static_checksum = 0;
    std::uint64_t plastic_checksum = 0;
    bool paper_scale = true;  // counts match the reference network sizes
};

TopologySummary summarize(const NetworkTopology& top);
/// One-line human-readable dump of counts and checksums.
std::string describe(const NetworkTopology& top);

}  // namespace spore::topo
