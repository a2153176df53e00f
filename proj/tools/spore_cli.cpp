#include "spore/checkpoint.hpp"
#include "spore/config.hpp"
#include "spore/experiments.hpp"
#include "spore/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace spore;

enum Exit { kOk = 0, kUsage = 1, kConfigError = 2, kRuntimeAbort = 3, kIoError = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void print_issues(const std::vector<ConfigIssue>& issues)
{
    for (const auto& i : issues)
        std::cerr << "config error: " << i.field << ": " << i.message << "\n";
}

struct RunFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    std::string out;
    std::string events;
    std::optional<double> checkpoint_every;
    std::string checkpoint_dir;
    std::string resume;
    std::string summary;
    bool no_learning = false;
};

ExperimentConfig load_config(const RunFlags& f)
{
    auto cfg = parse_config_or_throw(f.config.empty() ? std::string() : read_file(f.config));
    if (f.seed)
        cfg.seed = *f.seed;
    if (f.duration)
        cfg.duration = *f.duration;
    if (!f.out.empty())
        cfg.output.metrics = f.out;
    if (!f.events.empty())
        cfg.output.events = f.events;
    if (f.checkpoint_every)
        cfg.output.checkpoint_every = *f.checkpoint_every;
    if (!f.checkpoint_dir.empty())
        cfg.output.checkpoint_dir = f.checkpoint_dir;
    if (auto issues = check_config(cfg); !issues.empty())
        throw ConfigError(issues);
    return cfg;
}

int cmd_run(const RunFlags& f, harness::Policy policy)
{
    const auto cfg = load_config(f);
    harness::RunOptions opts;
    opts.policy = policy;
    opts.learning = policy == harness::Policy::Network && !f.no_learning;
    opts.log = &std::cerr;

    std::unique_ptr<metrics::AsyncFileSink> sink;
    if (!cfg.output.metrics.empty()) {
        try {
            sink = std::make_unique<metrics::AsyncFileSink>(cfg.output.metrics, !f.resume.empty());
        } catch (const std::exception& e) {
            throw IoError(e.what());
        }
        opts.sink = sink.get();
    }
    std::ofstream events;
    if (!cfg.output.events.empty()) {
        events.open(cfg.output.events);
        if (!events)
            throw IoError("cannot write " + cfg.output.events);
        opts.events = &events;
    }

    harness::Simulation sim(cfg, opts);
    if (!f.resume.empty()) {
        sim.load_checkpoint(f.resume);
        std::cerr << "resumed at t=" << sim.time() << " s\n";
    }
    const Tick step = cfg.output.checkpoint_every > 0.0
                          ? whole_steps(cfg.output.checkpoint_every, cfg.harness.fine_dt)
                          : sim.end_tick();
    const bool checkpoints = cfg.output.checkpoint_every > 0.0;
    if (checkpoints)
        std::filesystem::create_directories(cfg.output.checkpoint_dir);
    try {
        while (sim.now() < sim.end_tick()) {
            const Tick next = std::min(sim.end_tick(), (sim.now() / step + 1) * step);
            sim.run(next);
            if (checkpoints) {
                const auto dir = std::filesystem::path(cfg.output.checkpoint_dir);
                const auto name = "checkpoint_" + std::to_string(sim.now()) + ".bin";
                sim.save_checkpoint((dir / name).string());
                sim.save_checkpoint((dir / "latest.bin").string());
            }
            if (sim.now() < next)
                break;  // duration not reachable in whole windows
        }
    } catch (const harness::RuntimeAbort& e) {
        std::cerr << "runtime abort: " << e.what() << "\n" << e.diagnostic() << "\n";
        if (!cfg.output.metrics.empty()) {
            std::ofstream diag(cfg.output.metrics + ".abort.json");
            diag << e.diagnostic() << "\n";
        }
        if (sink)
            sink->close();
        return kRuntimeAbort;
    }
    sim.finish();
    if (sink)
        sink->close();
    const auto text = harness::summary_text(sim.record());
    std::cout << text;
    if (!f.summary.empty()) {
        std::ofstream out(f.summary);
        if (!out)
            throw IoError("cannot write " + f.summary);
        out << text;
    }
    return kOk;
}

std::vector<double> parse_values(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::stod(item));
    return out;
}

std::vector<std::string> parse_words(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

void write_or_print(const std::string& path, const std::string& text)
{
    std::cout << text;
    if (path.empty())
        return;
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << text;
}

void add_run_flags(CLI::App* cmd, RunFlags& f)
{
    cmd->add_option("config", f.config, "Experiment config file (JSON); omitted means defaults");
    cmd->add_option("--seed", f.seed, "Run seed");
    cmd->add_option("--duration", f.duration, "Simulated seconds");
    cmd->add_option("--out", f.out, "Metrics stream path (JSON lines)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reward-based synaptic sampling for closed-loop spiking control"};
    app.require_subcommand(1);

    RunFlags run_flags, base_flags, sweep_flags;

    auto* validate = app.add_subcommand("validate", "Check a config file and print its canonical form");
    std::string validate_path;
    validate->add_option("config", validate_path, "Config file")->required();

    auto* run = app.add_subcommand("run", "Run one closed-loop learning experiment");
    add_run_flags(run, run_flags);
    run->add_option("--events", run_flags.events, "Event dump path");
    run->add_option("--checkpoint-every", run_flags.checkpoint_every, "Checkpoint cadence, simulated seconds");
    run->add_option("--checkpoint-dir", run_flags.checkpoint_dir, "Checkpoint directory");
    run->add_option("--resume", run_flags.resume, "Checkpoint to resume from");
    run->add_option("--summary", run_flags.summary, "Also write the summary to this file");
    run->add_flag("--no-learning", run_flags.no_learning, "Freeze the plastic synapses");

    auto* baseline = app.add_subcommand("baseline", "Run the random-policy baseline");
    add_run_flags(baseline, base_flags);
    baseline->add_option("--summary", base_flags.summary, "Also write the summary to this file");

    std::string prior_values = "0,0.25,1";
    std::string modes = "on,off";
    int trials = 1;
    unsigned jobs = 1;
    std::string runs_dir;
    auto* sweep_prior = app.add_subcommand("sweep-prior", "Sweep the prior strength c_p");
    add_run_flags(sweep_prior, sweep_flags);
    sweep_prior->add_option("--values", prior_values, "Comma-separated c_p values");
    sweep_prior->add_option("--trials", trials, "Trials per value")->check(CLI::NonNegativeNumber);
    sweep_prior->add_option("--jobs", jobs, "Parallel trials")->check(CLI::PositiveNumber);
    sweep_prior->add_option("--runs-dir", runs_dir, "Directory for per-trial metrics streams");

    auto* sweep_anneal = app.add_subcommand("sweep-annealing", "Compare annealing on and off (lane task)");
    add_run_flags(sweep_anneal, sweep_flags);
    sweep_anneal->add_option("--modes", modes, "Comma-separated modes (on, off)");
    sweep_anneal->add_option("--trials", trials, "Trials per mode")->check(CLI::NonNegativeNumber);
    sweep_anneal->add_option("--jobs", jobs, "Parallel trials")->check(CLI::PositiveNumber);
    sweep_anneal->add_option("--runs-dir", runs_dir, "Directory for per-trial metrics streams");

    auto* plots = app.add_subcommand("export-plots", "Turn metrics streams into plot tables");
    std::vector<std::string> plot_inputs;
    std::string plot_dir = "plots";
    double plot_bin = 250.0;
    plots->add_option("metrics", plot_inputs, "Metrics streams")->required();
    plots->add_option("--out", plot_dir, "Output directory");
    plots->add_option("--bin", plot_bin, "Performance bin width, seconds")->check(CLI::PositiveNumber);

    auto* defaults = app.add_subcommand("defaults", "Print the default config for a task");
    std::string task = "reaching";
    bool audit = false;
    defaults->add_option("--task", task, "reaching or lane")->check(CLI::IsMember({"reaching", "lane"}));
    defaults->add_flag("--audit", audit, "Print each parameter-table row next to its config value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*validate) {
            auto result = validate_config(read_file(validate_path));
            if (!result.ok()) {
                print_issues(result.errors);
                return kConfigError;
            }
            std::cout << to_text(*result.config) << "\n";
            std::cerr << "config ok, hash " << config_hash(*result.config) << "\n";
            return kOk;
        }
        if (*run)
            return cmd_run(run_flags, harness::Policy::Network);
        if (*baseline)
            return cmd_run(base_flags, harness::Policy::Random);
        if (*sweep_prior || *sweep_anneal) {
            RunFlags f = sweep_flags;
            f.out.clear();
            auto cfg = load_config(f);
            if (*sweep_anneal && cfg.task != Task::Lane) {
                std::cerr << "config error: task: annealing sweeps run the lane task\n";
                return kConfigError;
            }
            exp::SweepOptions opts{trials, jobs, runs_dir};
            if (*sweep_prior) {
                auto rows = exp::sweep_prior(cfg, parse_values(prior_values), opts);
                write_or_print(sweep_flags.out, exp::format_sweep(rows, "c_p", "reach_rate_per_250s"));
            } else {
                auto rows = exp::sweep_annealing(cfg, parse_words(modes), opts);
                write_or_print(sweep_flags.out, exp::format_sweep(rows, "lambda", "time_on_lane_s"));
            }
            return kOk;
        }
        if (*plots) {
            std::vector<exp::MetricsData> data;
            for (const auto& p : plot_inputs)
                data.push_back(exp::load_metrics(p));
            exp::write_plots(exp::export_plots(data, plot_bin), plot_dir);
            std::cout << "wrote performance.tsv, weights.tsv, beta.tsv to " << plot_dir << "\n";
            return kOk;
        }
        if (*defaults) {
            const auto cfg = default_config(task == "lane" ? Task::Lane : Task::Reaching);
            if (!audit) {
                std::cout << to_text(cfg) << "\n";
                return kOk;
            }
            for (const auto& row : table_default_audit(cfg))
                std::cout << row.table << "\t" << row.row << "\t" << row.value << "\t" << row.key << "\n";
            return kOk;
        }
    } catch (const ConfigError& e) {
        print_issues(e.issues());
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const ckpt::CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return e.kind() == ckpt::CheckpointError::Kind::Io ? kIoError : kRuntimeAbort;
    } catch (const harness::RuntimeAbort& e) {
        std::cerr << "runtime abort: " << e.what() << "\n" << e.diagnostic() << "\n";
        return kRuntimeAbort;
    } catch (const exp::MetricsError& e) {
        std::cerr << "metrics error: " << e.what() << "\n";
        return e.kind() == exp::MetricsError::Kind::Io ? kIoError : kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "runtime abort: " << e.what() << "\n";
        return kRuntimeAbort;
    }
    return kUsage;
}
