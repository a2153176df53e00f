#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <fstream>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace spore::metrics {

inline constexpr std::string_view kSchema = "spore-metrics";
inline constexpr int kSchemaVersion = 1;

/// Bin edges of the weight histograms: log-spaced, ten per decade, with the
/// weak-weight threshold 0.07 as one of the edges. Weights below the first
/// edge (including exact zeros) fall in bin 0.
const std::vector<double>& histogram_edges();
std::vector<std::uint64_t> weight_histogram(const std::vector<double>& weights);

/// Appends JSON fragments to a line without a general-purpose serializer.
/// Booleans are written as 0 and 1.
class LineBuilder {
public:
    LineBuilder& begin();
    LineBuilder& field(std::string_view key, double v);
    LineBuilder& field(std::string_view key, std::int64_t v);
    LineBuilder& field(std::string_view key, std::uint64_t v);
    LineBuilder& field(std::string_view key, int v) { return field(key, static_cast<std::int64_t>(v)); }
    LineBuilder& field(std::string_view key, bool v);
    LineBuilder& field(std::string_view key, std::string_view v);
    LineBuilder& field(std::string_view key, const char* v) { return field(key, std::string_view(v)); }
    LineBuilder& field(std::string_view key, const std::string& v) { return field(key, std::string_view(v)); }
    LineBuilder& raw(std::string_view key, std::string_view json);
    /// Closes the object and returns the line (without newline).
    const std::string& end();

private:
    void key(std::string_view k);
    std::string line_;
    bool first_ = true;
};

/// Shortest round-trip decimal form of a double; NaN and infinities become
/// null.
std::string format_double(double v);

/// Destination for the line-oriented metrics stream.
class Sink {
public:
    virtual ~Sink() = default;
    virtual void write_line(std::string_view line) = 0;
    virtual void flush() {}
};

/// Collects lines in memory.
class MemorySink : public Sink {
public:
    void write_line(std::string_view line) override { lines_.emplace_back(line); }
    const std::vector<std::string>& lines() const { return lines_; }
    std::string text() const;

private:
    std::vector<std::string> lines_;
};

/// Writes lines to a file from a background thread. The producer blocks
/// while `max_pending` batches are queued, so nothing is dropped.
class AsyncFileSink : public Sink {
public:
    explicit AsyncFileSink(const std::string& path, bool append = false, std::size_t max_pending = 64,
                           std::size_t batch_bytes = 1 << 16);
    ~AsyncFileSink() override;
    AsyncFileSink(const AsyncFileSink&) = delete;
    AsyncFileSink& operator=(const AsyncFileSink&) = delete;

    void write_line(std::string_view line) override;
    /// Blocks until every line written so far is on disk.
    void flush() override;
    void close();

private:
    void worker();

    std::ofstream out_;
    std::string current_;
    std::size_t batch_bytes_;
    std::size_t max_pending_;
    std::deque<std::string> queue_;
    std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::condition_variable drained_;
    bool busy_ = false;
    bool stop_ = false;
    bool failed_ = false;
    std::thread thread_;
};

}  // namespace spore::metrics
