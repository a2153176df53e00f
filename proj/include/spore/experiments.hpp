#pragma once

#include "spore/config.hpp"
#include "spore/harness.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spore::exp {

/// Runs `count` independent jobs on up to `jobs` threads. Each index is
/// processed exactly once; callers store results by index, which keeps the
/// merged output independent of scheduling.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

struct SweepRow {
    std::string label;
    double parameter = 0.0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> values;                // one per trial
    std::vector<std::vector<double>> series;   // per trial performance trajectory
    double mean = 0.0;
    double sd = 0.0;
};

struct SweepOptions {
    int trials = 1;
    unsigned jobs = 1;
    std::string out_dir;  // per-trial metrics files when non-empty
};

/// Reach rate over the final 250 s per prior strength c_p, trials with seeds
/// cfg.seed + i.
std::vector<SweepRow> sweep_prior(const ExperimentConfig& cfg, const std::vector<double>& values,
                                  const SweepOptions& opts);

/// Lane task with annealing on (cfg's lambda, or the default when cfg has
/// lambda = 0) and off (lambda = 0): mean time on lane over the final hour
/// (or the whole run when shorter) and per-hour trajectories.
std::vector<SweepRow> sweep_annealing(const ExperimentConfig& cfg, const std::vector<std::string>& modes,
                                      const SweepOptions& opts);

/// Mean and sample standard deviation (0 for fewer than two values).
std::pair<double, double> mean_sd(const std::vector<double>& v);

std::string format_sweep(const std::vector<SweepRow>& rows, const std::string& parameter_name,
                         const std::string& metric_name);

/// Contents of a metrics stream needed for plot export.
struct MetricsData {
    std::string path;
    std::string task;
    std::string config_hash;
    double fine_dt = 1e-3;
    harness::RunRecord record;
};

class MetricsError : public std::runtime_error {
public:
    enum class Kind { Io, Format };
    MetricsError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Throws MetricsError on unreadable files, malformed lines or a schema
/// mismatch. A file without any lines loads as an empty run.
MetricsData load_metrics(const std::string& path);

struct PlotFiles {
    std::string performance;
    std::string weights;
    std::string beta;
};

/// Delimited plot tables over runs aligned on common time bins, with the
/// mean and standard deviation across runs.
PlotFiles export_plots(const std::vector<MetricsData>& runs, double bin);
/// Writes the tables into `out_dir` as performance.tsv, weights.tsv and beta.tsv.
void write_plots(const PlotFiles& files, const std::string& out_dir);

}  // namespace spore::exp
