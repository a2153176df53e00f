#pragma once

#include "spore/clock.hpp"
#include "spore/environments.hpp"
#include "spore/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace spore::vision {

enum class Polarity : std::uint8_t { On, Off };

struct AddressEvent {
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    Polarity polarity = Polarity::On;
    Tick tick = 0;
};

/// Row-major intensity image with values in [0, 1].
struct IntensityFrame {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    Tick tick = 0;

    IntensityFrame() = default;
    IntensityFrame(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0) {}
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Per-pixel log-intensity reference of an emulated DVS.
struct DvsMemory {
    int width = 0;
    int height = 0;
    bool initialized = false;
    std::vector<double> reference;
    // Cache of the last log conversion per pixel.
    std::vector<double> last_intensity;
    std::vector<double> last_log;

    DvsMemory() = default;
    DvsMemory(int w, int h);
};

/// Core threshold-crossing rule on a log-intensity frame. For each pixel with
/// d = log_frame - ref, floor(|d| / threshold) events of sign(d) are emitted
/// and ref moves by that many thresholds. The first call only initializes.
void dvs_step_log(DvsMemory& memory, std::span<const double> log_frame, int width, double threshold,
                  Tick tick, std::vector<AddressEvent>& events);

/// Converts with log(I + eps) and applies dvs_step_log.
std::vector<AddressEvent> dvs_step(DvsMemory& memory, const IntensityFrame& frame, double threshold,
                                   double eps = 1e-3);
void dvs_step(DvsMemory& memory, const IntensityFrame& frame, double threshold, double eps,
              std::vector<AddressEvent>& events);

/// One spike per event on visual neuron y * width + x; polarity ignored.
std::vector<std::uint32_t> events_to_visual_spikes_reaching(std::span<const AddressEvent> events,
                                                            int width, int height);

/// Event counts per `window` x `window` pixel block, row-major over blocks.
std::vector<std::uint32_t> pool_events(std::span<const AddressEvent> events, int width, int height,
                                       int window);

/// Injected spike counts per visual neuron: Poisson(gain * window count).
std::vector<std::uint32_t> events_to_visual_rates_lane(std::span<const AddressEvent> events,
                                                       int width, int height, int window,
                                                       double gain, Rng& rng);

/// Line-oriented event dump: "tick x y +1|-1".
void write_events(std::ostream& out, std::span<const AddressEvent> events);

// -- renderers --------------------------------------------------------------

struct ReachingCameraParams {
    int width = 16;
    int height = 16;
    double ball_intensity = 0.2;
    double plane_intensity = 0.8;
};

/// Top-down camera over the whole plane, one sample at each pixel center.
/// Row 0 is the +y edge of the plane.
class ReachingCamera {
public:
    ReachingCamera(const ReachingCameraParams& p, const env::ReachingParams& world);
    void render(const env::ReachingState& st, IntensityFrame& frame) const;
    int width() const { return params_.width; }
    int height() const { return params_.height; }
    env::Vec2 pixel_center(int x, int y) const;

private:
    ReachingCameraParams params_;
    env::ReachingParams world_;
};

struct LaneCameraParams {
    int width = 128;
    int height = 32;
    int window = 8;             // pooling block size
    double mount_height = 0.25; // m
    double pitch = 25.0;        // deg below horizontal
    double hfov = 90.0;         // deg
    double road_intensity = 0.15;
    double marking_intensity = 0.9;
    double ground_intensity = 0.5;
    double sky_intensity = 0.7;
    double marking_width = 0.04; // m
    double dash_length = 0.3;    // m, center line dash and gap
    double raster_cell = 0.01;   // m, ground raster resolution; 0 samples the track geometry per ray
};

/// Forward-looking pinhole camera on the vehicle; flat-shaded road with edge
/// lines and a dashed center line, nearest-sample per pixel.
class LaneCamera {
public:
    LaneCamera(const LaneCameraParams& p, double lane_width);
    void render(const env::Pose& pose, const env::Track& track, IntensityFrame& frame) const;
    int width() const { return params_.width; }
    int height() const { return params_.height; }

private:
    struct Ray {
        bool ground = false;
        double forward = 0.0;
        double left = 0.0;
    };
    double shade(env::Vec2 p, const env::Track& track) const;
    void build_raster(const env::Track& track) const;

    LaneCameraParams params_;
    double lane_width_;
    std::vector<Ray> rays_;
    // Ground intensities on a regular grid, built on first use for a track.
    mutable const env::Track* raster_track_ = nullptr;
    mutable double raster_x0_ = 0.0, raster_y0_ = 0.0;
    mutable int raster_w_ = 0, raster_h_ = 0;
    mutable std::vector<double> raster_;
};

}  // namespace spore::vision
