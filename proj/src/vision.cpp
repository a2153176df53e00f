#include "spore/vision.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace spore::vision {

DvsMemory::DvsMemory(int w, int h)
    : width(w),
      height(h),
      reference(static_cast<std::size_t>(w) * h, 0.0),
      last_intensity(static_cast<std::size_t>(w) * h, -1.0),
      last_log(static_cast<std::size_t>(w) * h, 0.0)
{
}

void dvs_step_log(DvsMemory& memory, std::span<const double> log_frame, int width, double threshold,
                  Tick tick, std::vector<AddressEvent>& events)
{
    if (!(threshold > 0.0))
        throw std::invalid_argument("DVS threshold must be positive");
    if (log_frame.size() != memory.reference.size() || width != memory.width)
        throw std::invalid_argument("frame dimensions do not match DVS memory");
    if (!memory.initialized) {
        std::copy(log_frame.begin(), log_frame.end(), memory.reference.begin());
        memory.initialized = true;
        return;
    }
    for (std::size_t i = 0; i < log_frame.size(); ++i) {
        const double d = log_frame[i] - memory.reference[i];
        const double n = std::floor(std::abs(d) / threshold);
        if (n < 1.0)
            continue;
        const bool on = d > 0.0;
        memory.reference[i] += on ? n * threshold : -n * threshold;
        const AddressEvent ev{static_cast<std::uint16_t>(i % width),
                              static_cast<std::uint16_t>(i / width),
                              on ? Polarity::On : Polarity::Off, tick};
        events.insert(events.end(), static_cast<std::size_t>(n), ev);
    }
}

void dvs_step(DvsMemory& memory, const IntensityFrame& frame, double threshold, double eps,
              std::vector<AddressEvent>& events)
{
    if (frame.width != memory.width || frame.height != memory.height)
        throw std::invalid_argument("frame dimensions do not match DVS memory");
    for (std::size_t i = 0; i < frame.values.size(); ++i) {
        const double v = frame.values[i];
        if (v != memory.last_intensity[i]) {
            memory.last_intensity[i] = v;
            memory.last_log[i] = std::log(v + eps);
        }
    }
    dvs_step_log(memory, memory.last_log, frame.width, threshold, frame.tick, events);
}

std::vector<AddressEvent> dvs_step(DvsMemory& memory, const IntensityFrame& frame, double threshold,
                                   double eps)
{
    std::vector<AddressEvent> events;
    dvs_step(memory, frame, threshold, eps, events);
    return events;
}

std::vector<std::uint32_t> events_to_visual_spikes_reaching(std::span<const AddressEvent> events,
                                                            int width, int height)
{
    std::vector<std::uint32_t> spikes(static_cast<std::size_t>(width) * height, 0);
    for (const auto& ev : events)
        ++spikes[static_cast<std::size_t>(ev.y) * width + ev.x];
    return spikes;
}

std::vector<std::uint32_t> pool_events(std::span<const AddressEvent> events, int width, int height,
                                       int window)
{
    if (window <= 0 || width % window != 0 || height % window != 0)
        throw std::invalid_argument("pooling window must tile the sensor");
    const int bw = width / window;
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(bw) * (height / window), 0);
    for (const auto& ev : events)
        ++counts[static_cast<std::size_t>(ev.y / window) * bw + ev.x / window];
    return counts;
}

std::vector<std::uint32_t> events_to_visual_rates_lane(std::span<const AddressEvent> events,
                                                       int width, int height, int window,
                                                       double gain, Rng& rng)
{
    auto counts = pool_events(events, width, height, window);
    for (auto& c : counts)
        c = c > 0 ? rng.poisson(gain * c) : 0;
    return counts;
}

void write_events(std::ostream& out, std::span<const AddressEvent> events)
{
    for (const auto& ev : events)
        out << ev.tick << ' ' << ev.x << ' ' << ev.y << ' '
            << (ev.polarity == Polarity::On ? "+1" : "-1") << '\n';
}

// -- reaching camera --------------------------------------------------------

ReachingCamera::ReachingCamera(const ReachingCameraParams& p, const env::ReachingParams& world)
    : params_(p), world_(world)
{
    if (p.width <= 0 || p.height <= 0)
        throw std::invalid_argument("camera resolution must be positive");
}

env::Vec2 ReachingCamera::pixel_center(int x, int y) const
{
    const double size = world_.plane_size;
    return {-size / 2.0 + (x + 0.5) * size / params_.width,
            size / 2.0 - (y + 0.5) * size / params_.height};
}

void ReachingCamera::render(const env::ReachingState& st, IntensityFrame& frame) const
{
    if (frame.width != params_.width || frame.height != params_.height)
        frame = IntensityFrame(params_.width, params_.height);
    const double r2 = world_.ball_radius * world_.ball_radius;
    for (int y = 0; y < params_.height; ++y) {
        for (int x = 0; x < params_.width; ++x) {
            const env::Vec2 d = pixel_center(x, y) - st.ball_pos;
            frame.at(x, y) = dot(d, d) <= r2 ? params_.ball_intensity : params_.plane_intensity;
        }
    }
}

// -- lane camera ------------------------------------------------------------

LaneCamera::LaneCamera(const LaneCameraParams& p, double lane_width) : params_(p), lane_width_(lane_width)
{
    if (p.width <= 0 || p.height <= 0)
        throw std::invalid_argument("camera resolution must be positive");
    const double f = (p.width / 2.0) / std::tan(env::radians(p.hfov) / 2.0);
    const double phi = env::radians(p.pitch);
    rays_.resize(static_cast<std::size_t>(p.width) * p.height);
    for (int j = 0; j < p.height; ++j) {
        for (int i = 0; i < p.width; ++i) {
            const double xr = (i + 0.5 - p.width / 2.0) / f;
            const double yd = (j + 0.5 - p.height / 2.0) / f;
            const double down = std::sin(phi) + yd * std::cos(phi);
            Ray ray;
            if (down > 1e-9) {
                const double t = p.mount_height / down;
                ray.ground = true;
                ray.forward = t * (std::cos(phi) - yd * std::sin(phi));
                ray.left = -t * xr;
            }
            rays_[static_cast<std::size_t>(j) * p.width + i] = ray;
        }
    }
}

double LaneCamera::shade(env::Vec2 p, const env::Track& track) const
{
    const double half_mark = params_.marking_width / 2.0;
    const double right_edge = -lane_width_ / 2.0;
    const double center_line = lane_width_ / 2.0;
    const double left_edge = 1.5 * lane_width_;
    const double lat = track.lateral_offset(p);
    if (lat < right_edge - half_mark || lat > left_edge + half_mark)
        return params_.ground_intensity;
    if (std::abs(lat - right_edge) <= half_mark || std::abs(lat - left_edge) <= half_mark)
        return params_.marking_intensity;
    if (std::abs(lat - center_line) <= half_mark) {
        const double phase = std::fmod(track.arc_length(p), 2.0 * params_.dash_length);
        if (phase < params_.dash_length)
            return params_.marking_intensity;
    }
    return params_.road_intensity;
}

void LaneCamera::build_raster(const env::Track& track) const
{
    const double cell = params_.raster_cell;
    const double pad = 2.0 * lane_width_ + params_.marking_width + 2.0 * cell;
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (double s = 0.0; s < track.length(); s += cell) {
        const auto q = track.pose_at(s);
        x0 = std::min(x0, q.x);
        y0 = std::min(y0, q.y);
        x1 = std::max(x1, q.x);
        y1 = std::max(y1, q.y);
    }
    raster_x0_ = x0 - pad;
    raster_y0_ = y0 - pad;
    raster_w_ = static_cast<int>(std::ceil((x1 - x0 + 2.0 * pad) / cell));
    raster_h_ = static_cast<int>(std::ceil((y1 - y0 + 2.0 * pad) / cell));
    raster_.assign(static_cast<std::size_t>(raster_w_) * raster_h_, 0.0);
    for (int r = 0; r < raster_h_; ++r)
        for (int c = 0; c < raster_w_; ++c) {
            const env::Vec2 p{raster_x0_ + (c + 0.5) * cell, raster_y0_ + (r + 0.5) * cell};
            raster_[static_cast<std::size_t>(r) * raster_w_ + c] = shade(p, track);
        }
    raster_track_ = &track;
}

void LaneCamera::render(const env::Pose& pose, const env::Track& track, IntensityFrame& frame) const
{
    if (frame.width != params_.width || frame.height != params_.height)
        frame = IntensityFrame(params_.width, params_.height);
    const bool raster = params_.raster_cell > 0.0;
    if (raster && raster_track_ != &track)
        build_raster(track);
    const double inv_cell = raster ? 1.0 / params_.raster_cell : 0.0;
    const double c = std::cos(pose.heading);
    const double s = std::sin(pose.heading);
    for (std::size_t k = 0; k < rays_.size(); ++k) {
        const Ray& ray = rays_[k];
        if (!ray.ground) {
            frame.values[k] = params_.sky_intensity;
            continue;
        }
        const env::Vec2 p{pose.x + ray.forward * c - ray.left * s, pose.y + ray.forward * s + ray.left * c};
        if (!raster) {
            frame.values[k] = shade(p, track);
            continue;
        }
        const auto col = static_cast<long>(std::floor((p.x - raster_x0_) * inv_cell));
        const auto row = static_cast<long>(std::floor((p.y - raster_y0_) * inv_cell));
        frame.values[k] = col >= 0 && row >= 0 && col < raster_w_ && row < raster_h_
                              ? raster_[static_cast<std::size_t>(row) * raster_w_ + col]
                              : params_.ground_intensity;
    }
}

}  // namespace spore::vision
