#include "spore/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace spore::metrics {

const std::vector<double>& histogram_edges()
{
    static const std::vector<double> edges = [] {
        std::vector<double> e;
        for (int k = -20; k <= 50; ++k)
            e.push_back(0.07 * std::pow(10.0, k / 10.0));
        e[20] = 0.07;
        return e;
    }();
    return edges;
}

std::vector<std::uint64_t> weight_histogram(const std::vector<double>& weights)
{
    const auto& edges = histogram_edges();
    std::vector<std::uint64_t> counts(edges.size() + 1, 0);
    for (double w : weights) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), w);
        ++counts[static_cast<std::size_t>(it - edges.begin())];
    }
    return counts;
}

std::string format_double(double v)
{
    if (!std::isfinite(v))
        return "null";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

LineBuilder& LineBuilder::begin()
{
    line_.clear();
    line_.push_back('{');
    first_ = true;
    return *this;
}

void LineBuilder::key(std::string_view k)
{
    if (!first_)
        line_.push_back(',');
    first_ = false;
    line_.push_back('"');
    line_.append(k);
    line_.append("\":");
}

LineBuilder& LineBuilder::field(std::string_view k, double v)
{
    key(k);
    if (!std::isfinite(v)) {
        line_.append("null");
        return *this;
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    line_.append(buf, res.ptr);
    return *this;
}

LineBuilder& LineBuilder::field(std::string_view k, std::int64_t v)
{
    key(k);
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    line_.append(buf, res.ptr);
    return *this;
}

LineBuilder& LineBuilder::field(std::string_view k, std::uint64_t v)
{
    key(k);
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    line_.append(buf, res.ptr);
    return *this;
}

LineBuilder& LineBuilder::field(std::string_view k, bool v)
{
    key(k);
    line_.append(v ? "1" : "0");
    return *this;
}

LineBuilder& LineBuilder::field(std::string_view k, std::string_view v)
{
    key(k);
    line_.push_back('"');
    for (char c : v) {
        if (c == '"' || c == '\\')
            line_.push_back('\\');
        line_.push_back(c);
    }
    line_.push_back('"');
    return *this;
}

LineBuilder& LineBuilder::raw(std::string_view k, std::string_view json)
{
    key(k);
    line_.append(json);
    return *this;
}

const std::string& LineBuilder::end()
{
    line_.push_back('}');
    return line_;
}

std::string MemorySink::text() const
{
    std::string out;
    for (const auto& l : lines_) {
        out += l;
        out += '\n';
    }
    return out;
}

AsyncFileSink::AsyncFileSink(const std::string& path, bool append, std::size_t max_pending,
                             std::size_t batch_bytes)
    : out_(path, append ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc),
      batch_bytes_(batch_bytes), max_pending_(std::max<std::size_t>(max_pending, 1))
{
    if (!out_)
        throw std::runtime_error("cannot open metrics file " + path);
    thread_ = std::thread([this] { worker(); });
}

AsyncFileSink::~AsyncFileSink()
{
    try {
        close();
    } catch (...) {
    }
}

void AsyncFileSink::write_line(std::string_view line)
{
    current_.append(line);
    current_.push_back('\n');
    if (current_.size() < batch_bytes_)
        return;
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [this] { return queue_.size() < max_pending_; });
    queue_.push_back(std::move(current_));
    current_.clear();
    not_empty_.notify_one();
}

void AsyncFileSink::flush()
{
    std::unique_lock lock(mutex_);
    if (!current_.empty()) {
        not_full_.wait(lock, [this] { return queue_.size() < max_pending_; });
        queue_.push_back(std::move(current_));
        current_.clear();
        not_empty_.notify_one();
    }
    drained_.wait(lock, [this] { return queue_.empty() && !busy_; });
    if (failed_)
        throw std::runtime_error("metrics write failed");
}

void AsyncFileSink::close()
{
    if (!thread_.joinable())
        return;
    flush();
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    not_empty_.notify_one();
    thread_.join();
    out_.close();
}

void AsyncFileSink::worker()
{
    std::unique_lock lock(mutex_);
    for (;;) {
        not_empty_.wait(lock, [this] { return stop_ || !queue_.empty(); });
        if (queue_.empty() && stop_)
            return;
        std::string batch = std::move(queue_.front());
        queue_.pop_front();
        busy_ = true;
        not_full_.notify_one();
        lock.unlock();
        out_.write(batch.data(), static_cast<std::streamsize>(batch.size()));
        out_.flush();
        const bool bad = !out_;
        lock.lock();
        failed_ = failed_ || bad;
        busy_ = false;
        if (queue_.empty())
            drained_.notify_all();
    }
}

}  // namespace spore::metrics
