#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

fs::path scratch()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "spore_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Result spore(const std::string& args)
{
    const auto out = scratch() / "stdout.txt";
    const std::string cmd = std::string("\"") + SPORE_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    return r;
}

fs::path write(const std::string& name, const std::string& text)
{
    const auto p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

std::size_t count_prefix(const std::string& text, const std::string& prefix)
{
    std::size_t n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        n += line.rfind(prefix, 0) == 0;
    return n;
}

const std::string kSmall = R"({"vision":{"reaching_camera":{"width":8,"height":8}}})";

}  // namespace

TEST_CASE("validate accepts an empty file and prints defaults")
{
    const auto p = write("empty.json", "");
    const auto r = spore("validate " + p.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("\"task\": \"reaching\"") != std::string::npos);
}

TEST_CASE("validate lists every violation with exit code 2")
{
    const auto p = write("bad.json", R"({"plasticity":{"theta_min":6,"lambda":-1},"neuron":{"tau_rsie":1}})");
    const auto r = spore("validate " + p.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("plasticity.theta_min, plasticity.theta_max") != std::string::npos);
    CHECK(r.out.find("plasticity.lambda") != std::string::npos);
    CHECK(r.out.find("neuron.tau_rsie") != std::string::npos);
}

TEST_CASE("missing config file is an I/O error")
{
    CHECK(spore("validate " + (scratch() / "nope.json").string()).code == 4);
    CHECK(spore("run " + (scratch() / "nope.json").string()).code == 4);
}

TEST_CASE("usage errors")
{
    CHECK(spore("").code == 1);
    CHECK(spore("frobnicate").code == 1);
    CHECK(spore("--help").code == 0);
}

TEST_CASE("a 60 s run writes 60000 window records and repeats exactly")
{
    const auto cfg = write("small.json", kSmall);
    const auto a = scratch() / "a.jsonl", b = scratch() / "b.jsonl";
    const auto r1 = spore("run " + cfg.string() + " --seed 1 --duration 60 --out " + a.string());
    REQUIRE(r1.code == 0);
    CHECK(r1.out.find("final_reach_rate_per_250s") != std::string::npos);
    CHECK(r1.out.find("final_beta") != std::string::npos);
    const auto text = slurp(a);
    CHECK(count_prefix(text, "{\"w\":") == 60000);
    CHECK(count_prefix(text, "{\"type\":\"header\"") == 1);
    CHECK(count_prefix(text, "{\"type\":\"summary\"") == 1);
    REQUIRE(spore("run " + cfg.string() + " --seed 1 --duration 60 --out " + b.string()).code == 0);
    CHECK(slurp(b) == text);
}

TEST_CASE("checkpointed run resumes to the same summary")
{
    const auto cfg = write("small_ck.json", kSmall);
    const auto dir = scratch() / "ck";
    const auto full = scratch() / "full.jsonl", part = scratch() / "part.jsonl";
    REQUIRE(spore("run " + cfg.string() + " --duration 4 --out " + full.string()).code == 0);
    REQUIRE(spore("run " + cfg.string() + " --duration 2 --checkpoint-every 1 --checkpoint-dir " + dir.string() +
                  " --out " + part.string())
                .code == 0);
    CHECK(fs::exists(dir / "checkpoint_1000.bin"));
    CHECK(fs::exists(dir / "latest.bin"));
    const auto rest = spore("run " + cfg.string() + " --duration 4 --resume " + (dir / "latest.bin").string() +
                            " --out " + part.string());
    REQUIRE(rest.code == 0);
    // Appended stream: its window records match the uninterrupted run.
    const auto windows = [](const std::string& text) {
        std::string out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("{\"w\":", 0) == 0)
                out += line + "\n";
        return out;
    };
    CHECK(windows(slurp(part)) == windows(slurp(full)));

    const auto other = write("other.json", R"({"vision":{"reaching_camera":{"width":8,"height":8}},"plasticity":{"temperature":0.2}})");
    CHECK(spore("run " + other.string() + " --duration 4 --resume " + (dir / "latest.bin").string()).code == 3);
}

TEST_CASE("baseline runs without a network")
{
    const auto cfg = write("lane.json", R"({"task":"lane"})");
    const auto r = spore("baseline " + cfg.string() + " --duration 120");
    CHECK(r.code == 0);
    CHECK(r.out.find("mean_time_on_lane_final_hour") != std::string::npos);
}

TEST_CASE("sweeps")
{
    const auto cfg = write("sweep.json", kSmall);
    auto r = spore("sweep-prior " + cfg.string() + " --values 0 --trials 1 --duration 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("\t0\t") != std::string::npos);  // sd of a single trial
    r = spore("sweep-prior " + cfg.string() + " --values 0,1 --trials 0 --duration 2");
    CHECK(r.code == 0);
    r = spore("sweep-prior " + cfg.string() + " --values -1 --trials 1 --duration 2");
    CHECK(r.code != 0);
    const auto lane = write("sweep_lane.json", R"({"task":"lane"})");
    r = spore("sweep-annealing " + lane.string() + " --trials 0 --duration 2");
    CHECK(r.code == 0);
    r = spore("sweep-annealing " + lane.string() + " --modes on,off --trials 1 --jobs 2 --duration 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("annealing=on") != std::string::npos);
    CHECK(r.out.find("annealing=off") != std::string::npos);
    CHECK(spore("sweep-annealing " + cfg.string() + " --trials 1 --duration 2").code == 2);
}

TEST_CASE("plot export")
{
    const auto cfg = write("plots.json", R"({"vision":{"reaching_camera":{"width":8,"height":8}},"harness":{"snapshot_every":1}})");
    const auto a = scratch() / "p1.jsonl", b = scratch() / "p2.jsonl";
    REQUIRE(spore("run " + cfg.string() + " --seed 1 --duration 3 --out " + a.string()).code == 0);
    REQUIRE(spore("run " + cfg.string() + " --seed 2 --duration 3 --out " + b.string()).code == 0);
    const auto out = scratch() / "plots";
    REQUIRE(spore("export-plots " + a.string() + " " + b.string() + " --bin 1 --out " + out.string()).code == 0);
    const auto perf = slurp(out / "performance.tsv");
    CHECK(perf.find("run0\trun1\tmean\tsd") != std::string::npos);
    CHECK(count_prefix(perf, "0\t1\t") == 1);
    const auto weights = slurp(out / "weights.tsv");
    CHECK(weights.find("0.07") != std::string::npos);
    CHECK(slurp(out / "beta.tsv").find("mean") != std::string::npos);

    const auto empty = write("empty.jsonl", "");
    const auto out2 = scratch() / "plots_empty";
    CHECK(spore("export-plots " + empty.string() + " --out " + out2.string()).code == 0);
    CHECK(count_prefix(slurp(out2 / "performance.tsv"), "t_start") == 1);

    auto text = slurp(a);
    const auto pos = text.find("\"version\":1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "\"version\":9");
    const auto future = write("future.jsonl", text);
    CHECK(spore("export-plots " + future.string() + " --out " + out2.string()).code == 2);
    CHECK(spore("export-plots " + (scratch() / "missing.jsonl").string()).code == 4);
}

TEST_CASE("defaults audit prints every table row")
{
    const auto r = spore("defaults --audit");
    CHECK(r.code == 0);
    CHECK(r.out.find("SPORE Parameters\tinitial learning rate") != std::string::npos);
    CHECK(r.out.find("1e-7") != std::string::npos);
    CHECK(r.out.find("NEST Parameters") != std::string::npos);
    CHECK(r.out.find("ROS-MUSIC Parameters") != std::string::npos);
    const auto lane = spore("defaults --task lane");
    CHECK(lane.code == 0);
    CHECK(lane.out.find("\"task\": \"lane\"") != std::string::npos);
}
