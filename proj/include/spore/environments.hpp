#pragma once

#include "spore/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace spore::env {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Wraps an angle in radians to (-pi, pi].
double wrap_angle(double radians);
double degrees(double radians);
double radians(double degrees);

// -- reaching ---------------------------------------------------------------

struct ReachingParams {
    double plane_size = 20.0;     // m, square side
    double ball_radius = 2.0;     // m
    double goal_radius = 2.0;     // m, centered on the plane
    double reset_clearance = 1.0; // m beyond the goal disk
    double beta_lim = 45.0;       // deg
    double v_lim = 0.1;           // m/s
};

struct ReachingState {
    Vec2 ball_pos;
    Vec2 last_cmd_velocity;
};

struct ReachingStep {
    bool reached = false;
    bool reset = false;
    Vec2 velocity;  // displacement over the step / dt, before any reset
};

/// Integrates the command, clamps the ball inside the walls, and resets it to
/// a random position when its center enters the goal disk. A wall removes the
/// blocked component from the realized velocity.
ReachingStep reaching_step(ReachingState& st, Vec2 v_cmd, double dt, const ReachingParams& p,
                           Rng& rng);

/// Uniform position inside the walls at least goal_radius + reset_clearance
/// away from the plane center.
Vec2 random_ball_position(const ReachingParams& p, Rng& rng);

/// Angle in degrees between the direction to the goal and the velocity.
double reaching_direction_error(Vec2 ball_pos, Vec2 v);

/// 35 sqrt(r_v) (r_beta + 1)^5 for a ball moving with velocity `v` from the
/// position in `st`. The harness passes the realized velocity of the step, so
/// pushing into a wall earns nothing. `beta_lim` in degrees.
double reaching_reward(const ReachingState& st, Vec2 v, double beta_lim, double v_lim);

// -- track ------------------------------------------------------------------

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // rad, counterclockwise from +x
};

/// Closed centerline made of line and arc pieces, driven in segment order.
class Track {
public:
    struct Segment {
        enum class Kind : std::uint8_t { Line, Arc } kind = Kind::Line;
        Vec2 a;              // line start, or arc center
        Vec2 b;              // line end
        double radius = 0.0; // arc
        double start = 0.0;  // arc start angle, rad
        double sweep = 0.0;  // arc signed sweep, rad (|sweep| <= pi)
        double length = 0.0;
        double s0 = 0.0;     // arc-length at segment start
    };

    struct Nearest {
        double distance = 0.0;
        double lateral = 0.0;  // signed offset, positive to the left of travel
        double tangent = 0.0;  // heading of travel at the nearest point, rad
        double s = 0.0;        // arc-length of the nearest point
        std::size_t segment = 0;
    };

    /// Two straights joined by two half circles, driven counterclockwise. The
    /// first straight runs along +x at y = -radius.
    static Track rounded_rectangle(double straight, double radius);

    const std::vector<Segment>& segments() const { return segments_; }
    double length() const { return length_; }

    /// Nearest centerline point; equidistant candidates resolve to the lowest
    /// segment index.
    Nearest nearest(Vec2 p) const;
    /// Signed lateral offset only (no arc-length), for rendering.
    double lateral_offset(Vec2 p) const;
    /// Arc-length of the nearest point.
    double arc_length(Vec2 p) const;
    Pose pose_at(double s) const;

private:
    void add(Segment seg);

    std::vector<Segment> segments_;
    double length_ = 0.0;
};

struct TrackErrors {
    double d_err = 0.0;     // m, >= 0
    double beta_err = 0.0;  // deg, in [0, 180]
};

TrackErrors track_errors(const Pose& pose, const Track& track);

// -- lane following ---------------------------------------------------------

struct LaneParams {
    double straight = 10.0;      // m
    double radius = 2.0;         // m, right-lane centerline arcs
    double lane_width = 0.5;     // m
    double margin = 0.1;         // m
    double linear_speed = 0.5;   // m/s
    double wheelbase = 0.2;      // m
    double start_s = 1.0;        // m, arc-length of the start pose
};

struct LaneState {
    Pose pose;
    double linear_speed = 0.0;
    TrackErrors errors;
};

struct LaneStep {
    bool off_track = false;
    bool reset = false;
    TrackErrors errors;  // at the end of the step, before any reset
};

LaneState lane_start_state(const LaneParams& p, const Track& track);

/// Constant-curvature (exact) kinematic step, error update, and reset to the
/// start pose when the vehicle leaves the lane. `steering` in degrees.
LaneStep lane_step(LaneState& st, double steering, double dt, const LaneParams& p,
                   const Track& track);

/// exp(-0.03 beta_err^2) * exp(-70 d_err^2); beta_err in degrees, d_err in m.
double lane_reward(double beta_err, double d_err);

}  // namespace spore::env
