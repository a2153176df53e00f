#include "spore/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace spore::exp {

using json = nlohmann::json;

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body)
{
    if (count == 0)
        return;
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::pair<double, double> mean_sd(const std::vector<double>& v)
{
    if (v.empty())
        return {0.0, 0.0};
    double sum = 0.0;
    for (double x : v)
        sum += x;
    const double mean = sum / static_cast<double>(v.size());
    if (v.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

namespace {

struct Trial {
    std::size_t row = 0;
    ExperimentConfig cfg;
    std::string metrics_path;
};

harness::RunRecord run_trial(const Trial& t)
{
    harness::RunOptions opts;
    std::unique_ptr<metrics::AsyncFileSink> sink;
    if (!t.metrics_path.empty()) {
        sink = std::make_unique<metrics::AsyncFileSink>(t.metrics_path);
        opts.sink = sink.get();
    }
    auto rec = harness::run_experiment(t.cfg, opts);
    if (sink)
        sink->close();
    return rec;
}

std::string trial_path(const SweepOptions& opts, const std::string& label, std::uint64_t seed)
{
    if (opts.out_dir.empty())
        return {};
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / (label + "_seed" + std::to_string(seed) + ".jsonl")).string();
}

std::string number_label(double v)
{
    std::ostringstream out;
    out << v;
    return out.str();
}

template <typename Metric, typename Series>
void run_rows(std::vector<SweepRow>& rows, std::vector<Trial>& trials, const SweepOptions& opts, Metric metric,
              Series series)
{
    std::vector<double> values(trials.size());
    std::vector<std::vector<double>> traj(trials.size());
    parallel_for(trials.size(), opts.jobs, [&](std::size_t i) {
        const auto rec = run_trial(trials[i]);
        values[i] = metric(rec);
        traj[i] = series(rec);
    });
    for (std::size_t i = 0; i < trials.size(); ++i) {
        auto& row = rows[trials[i].row];
        row.seeds.push_back(trials[i].cfg.seed);
        row.values.push_back(values[i]);
        row.series.push_back(std::move(traj[i]));
    }
    for (auto& row : rows)
        std::tie(row.mean, row.sd) = mean_sd(row.values);
}

}  // namespace

std::vector<SweepRow> sweep_prior(const ExperimentConfig& cfg, const std::vector<double>& values,
                                  const SweepOptions& opts)
{
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("prior strengths must be finite and non-negative");
    std::vector<SweepRow> rows;
    std::vector<Trial> trials;
    for (double v : values) {
        SweepRow row;
        row.label = "c_p=" + number_label(v);
        row.parameter = v;
        for (int i = 0; i < opts.trials; ++i) {
            Trial t;
            t.row = rows.size();
            t.cfg = cfg;
            t.cfg.plasticity.c_p = v;
            t.cfg.seed = cfg.seed + static_cast<std::uint64_t>(i);
            t.metrics_path = trial_path(opts, "prior_" + number_label(v), t.cfg.seed);
            trials.push_back(std::move(t));
        }
        rows.push_back(std::move(row));
    }
    run_rows(rows, trials, opts, [](const harness::RunRecord& r) { return harness::final_reach_rate(r); },
             [](const harness::RunRecord& r) {
                 std::vector<double> s;
                 for (auto c : harness::reach_rate_series(r))
                     s.push_back(static_cast<double>(c));
                 return s;
             });
    return rows;
}

std::vector<SweepRow> sweep_annealing(const ExperimentConfig& cfg, const std::vector<std::string>& modes,
                                      const SweepOptions& opts)
{
    const double on_lambda = cfg.plasticity.lambda > 0.0 ? cfg.plasticity.lambda : plasticity::PlasticityConfig{}.lambda;
    std::vector<SweepRow> rows;
    std::vector<Trial> trials;
    for (const auto& mode : modes) {
        if (mode != "on" && mode != "off")
            throw std::invalid_argument("annealing mode must be on or off, got " + mode);
        SweepRow row;
        row.label = "annealing=" + mode;
        row.parameter = mode == "on" ? on_lambda : 0.0;
        for (int i = 0; i < opts.trials; ++i) {
            Trial t;
            t.row = rows.size();
            t.cfg = cfg;
            t.cfg.plasticity.lambda = row.parameter;
            t.cfg.seed = cfg.seed + static_cast<std::uint64_t>(i);
            t.metrics_path = trial_path(opts, "annealing_" + mode, t.cfg.seed);
            trials.push_back(std::move(t));
        }
        rows.push_back(std::move(row));
    }
    run_rows(rows, trials, opts,
             [](const harness::RunRecord& r) {
                 const double end = r.seconds();
                 return harness::mean_time_on_lane(r, std::max(0.0, end - 3600.0), end);
             },
             [](const harness::RunRecord& r) {
                 std::vector<double> s;
                 const double end = r.seconds();
                 for (double t = 3600.0; t <= end + 1e-9; t += 3600.0)
                     s.push_back(harness::mean_time_on_lane(r, t - 3600.0, t));
                 return s;
             });
    return rows;
}

std::string format_sweep(const std::vector<SweepRow>& rows, const std::string& parameter_name,
                         const std::string& metric_name)
{
    std::ostringstream out;
    out << std::setprecision(10);
    out << "label\t" << parameter_name << "\ttrials\t" << metric_name << "_mean\t" << metric_name << "_sd\tvalues\n";
    for (const auto& row : rows) {
        out << row.label << "\t" << row.parameter << "\t" << row.values.size() << "\t" << row.mean << "\t" << row.sd << "\t";
        for (std::size_t i = 0; i < row.values.size(); ++i)
            out << (i ? "," : "") << row.values[i];
        out << "\n";
    }
    return out.str();
}

// -- plot export ------------------------------------------------------------

namespace {

bool flag_set(std::string_view line, std::string_view key)
{
    const auto pos = line.find(key);
    return pos != std::string_view::npos && pos + key.size() < line.size() && line[pos + key.size()] == '1';
}

}  // namespace

MetricsData load_metrics(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw MetricsError(MetricsError::Kind::Io, "cannot read metrics file " + path);
    MetricsData data;
    data.path = path;
    std::string line;
    bool header = false;
    bool any_line = false;
    auto& rec = data.record;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        any_line = true;
        if (line.rfind("{\"w\":", 0) == 0) {
            if (!header)
                throw MetricsError(MetricsError::Kind::Format, path + ": window record before header");
            Tick tick = 0;
            const auto* begin = line.data() + 5;
            const auto res = std::from_chars(begin, line.data() + line.size(), tick);
            if (res.ec != std::errc())
                throw MetricsError(MetricsError::Kind::Format, path + ": malformed window record");
            if (flag_set(line, "\"reach\":"))
                rec.reach_ticks.push_back(tick);
            if (flag_set(line, "\"reset\":"))
                rec.reset_ticks.push_back(tick);
            rec.ticks = tick;
            ++rec.windows;
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            throw MetricsError(MetricsError::Kind::Format, path + ": malformed metrics line");
        }
        const std::string type = j.value("type", "");
        if (type == "header") {
            if (j.value("schema", "") != metrics::kSchema || j.value("version", -1) != metrics::kSchemaVersion)
                throw MetricsError(MetricsError::Kind::Format, path + ": unsupported metrics schema " + j.value("schema", std::string("?")) +
                                         " version " + std::to_string(j.value("version", -1)));
            if (header)
                continue;  // resumed stream
            header = true;
            data.task = j.value("task", "");
            data.config_hash = j.value("config_hash", "");
            data.fine_dt = j.value("fine_dt", 1e-3);
            rec.fine_dt = data.fine_dt;
            rec.task = data.task == "lane" ? Task::Lane : Task::Reaching;
            rec.ticks = j.value("start_tick", static_cast<Tick>(0));
        } else if (type == "snapshot") {
            harness::Snapshot s;
            s.time = j.at("t").get<double>();
            s.beta = j.at("beta").get<double>();
            s.weak_fraction = j.at("weak").get<double>();
            s.weak_count = j.at("weak_count").get<std::uint64_t>();
            s.histogram = j.at("hist").get<std::vector<std::uint64_t>>();
            rec.snapshots.push_back(std::move(s));
        }
    }
    if (!header && rec.windows == 0 && rec.snapshots.empty() && !any_line)
        return data;  // an empty stream exports as empty tables
    if (!header)
        throw MetricsError(MetricsError::Kind::Format, path + ": missing metrics header");
    return data;
}

namespace {

void write_stats(std::ostringstream& out, const std::vector<double>& v)
{
    for (double x : v)
        out << "\t" << x;
    const auto [m, s] = mean_sd(v);
    out << "\t" << m << "\t" << s << "\n";
}

std::string run_columns(std::size_t n)
{
    std::string cols;
    for (std::size_t i = 0; i < n; ++i)
        cols += "\trun" + std::to_string(i);
    return cols + "\tmean\tsd\n";
}

}  // namespace

PlotFiles export_plots(const std::vector<MetricsData>& runs, double bin)
{
    if (bin <= 0.0)
        throw std::invalid_argument("bin must be positive");
    PlotFiles files;
    const bool lane = !runs.empty() && runs.front().record.task == Task::Lane;
    std::ostringstream perf, weights, beta;
    for (auto* o : {&perf, &weights, &beta})
        *o << std::setprecision(10);

    perf << "# " << (lane ? "mean time on lane (s) of attempts ending in each bin" : "reaches per bin") << ", bin "
         << bin << " s\n";
    perf << "t_start\tt_end" << run_columns(runs.size());
    std::size_t bins = runs.empty() ? 0 : SIZE_MAX;
    for (const auto& r : runs)
        bins = std::min(bins, static_cast<std::size_t>(std::floor(r.record.seconds() / bin + 1e-9)));
    for (std::size_t b = 0; b < bins; ++b) {
        const double t0 = static_cast<double>(b) * bin, t1 = t0 + bin;
        std::vector<double> v;
        for (const auto& r : runs)
            v.push_back(lane ? harness::mean_time_on_lane(r.record, t0, t1)
                             : static_cast<double>(harness::reach_count(r.record, t0, t1)));
        perf << t0 << "\t" << t1;
        write_stats(perf, v);
    }

    std::size_t snaps = runs.empty() ? 0 : SIZE_MAX;
    for (const auto& r : runs)
        snaps = std::min(snaps, r.record.snapshots.size());
    const auto& edges = metrics::histogram_edges();
    weights << "# weight histograms; bin 0 holds weights below " << edges.front()
            << " including zeros; weak-weight threshold marker at w = 0.07\n";
    weights << "t\tbin\tw_lo\tw_hi\tweak" << run_columns(runs.size());
    beta << "t" << run_columns(runs.size());
    for (std::size_t s = 0; s < snaps; ++s) {
        const double t = runs.front().record.snapshots[s].time;
        const std::size_t nbins = edges.size() + 1;
        for (std::size_t b = 0; b < nbins; ++b) {
            const double lo = b == 0 ? 0.0 : edges[b - 1];
            const double hi = b < edges.size() ? edges[b] : INFINITY;
            std::vector<double> v;
            for (const auto& r : runs) {
                const auto& h = r.record.snapshots[s].histogram;
                v.push_back(b < h.size() ? static_cast<double>(h[b]) : 0.0);
            }
            weights << t << "\t" << b << "\t" << lo << "\t" << hi << "\t" << (hi <= 0.07 + 1e-12 ? 1 : 0);
            write_stats(weights, v);
        }
        std::vector<double> bv;
        for (const auto& r : runs)
            bv.push_back(r.record.snapshots[s].beta);
        beta << t;
        write_stats(beta, bv);
    }
    files.performance = perf.str();
    files.weights = weights.str();
    files.beta = beta.str();
    return files;
}

void write_plots(const PlotFiles& files, const std::string& out_dir)
{
    std::filesystem::create_directories(out_dir);
    const auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream out(std::filesystem::path(out_dir) / name);
        if (!out)
            throw std::runtime_error("cannot write " + name + " in " + out_dir);
        out << text;
    };
    put("performance.tsv", files.performance);
    put("weights.tsv", files.weights);
    put("beta.tsv", files.beta);
}

}  // namespace spore::exp
