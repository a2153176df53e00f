#include "spore/environments.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spore::env {

constexpr double pi = std::numbers::pi;

double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * pi);
    return a <= -pi ? a + 2.0 * pi : a;
}

double degrees(double r) { return r * 180.0 / pi; }
double radians(double d) { return d * pi / 180.0; }

// -- reaching ---------------------------------------------------------------

Vec2 random_ball_position(const ReachingParams& p, Rng& rng)
{
    const double half = p.plane_size / 2.0 - p.ball_radius;
    const double min_dist = p.goal_radius + p.reset_clearance;
    if (min_dist >= half * std::sqrt(2.0))
        throw std::invalid_argument("reset clearance leaves no room on the plane");
    for (;;) {
        const Vec2 pos{rng.uniform(-half, half), rng.uniform(-half, half)};
        if (norm(pos) >= min_dist)
            return pos;
    }
}

ReachingStep reaching_step(ReachingState& st, Vec2 v_cmd, double dt, const ReachingParams& p,
                           Rng& rng)
{
    const double half = p.plane_size / 2.0 - p.ball_radius;
    const Vec2 before = st.ball_pos;
    st.ball_pos = st.ball_pos + dt * v_cmd;
    st.ball_pos.x = std::clamp(st.ball_pos.x, -half, half);
    st.ball_pos.y = std::clamp(st.ball_pos.y, -half, half);
    st.last_cmd_velocity = v_cmd;
    ReachingStep out;
    out.velocity = (1.0 / dt) * (st.ball_pos - before);
    if (norm(st.ball_pos) <= p.goal_radius) {
        out.reached = true;
        out.reset = true;
        st.ball_pos = random_ball_position(p, rng);
    }
    return out;
}

double reaching_direction_error(Vec2 ball_pos, Vec2 v)
{
    const Vec2 to_goal{-ball_pos.x, -ball_pos.y};
    if (norm(to_goal) == 0.0 || norm(v) == 0.0)
        return 0.0;
    return degrees(std::atan2(std::abs(cross(to_goal, v)), dot(to_goal, v)));
}

double reaching_reward(const ReachingState& st, Vec2 v, double beta_lim, double v_lim)
{
    const double speed = norm(v);
    const double r_v = speed > v_lim ? speed : 0.0;
    if (r_v == 0.0)
        return 0.0;
    const double beta_err = reaching_direction_error(st.ball_pos, v);
    const double r_beta = beta_err < beta_lim ? 1.0 - beta_err / beta_lim : 0.0;
    return 35.0 * std::sqrt(r_v) * std::pow(r_beta + 1.0, 5);
}

// -- track ------------------------------------------------------------------

void Track::add(Segment seg)
{
    seg.s0 = length_;
    length_ += seg.length;
    segments_.push_back(seg);
}

Track Track::rounded_rectangle(double straight, double radius)
{
    if (!(straight > 0.0) || !(radius > 0.0))
        throw std::invalid_argument("track dimensions must be positive");
    Track t;
    const double h = straight / 2.0;
    Segment s;
    s.kind = Segment::Kind::Line;
    s.a = {-h, -radius};
    s.b = {h, -radius};
    s.length = straight;
    t.add(s);
    Segment arc;
    arc.kind = Segment::Kind::Arc;
    arc.a = {h, 0.0};
    arc.radius = radius;
    arc.start = -pi / 2.0;
    arc.sweep = pi;
    arc.length = pi * radius;
    t.add(arc);
    s.a = {h, radius};
    s.b = {-h, radius};
    t.add(s);
    arc.a = {-h, 0.0};
    arc.start = pi / 2.0;
    t.add(arc);
    return t;
}

namespace {

Track::Nearest nearest_on_line(const Track::Segment& seg, Vec2 p)
{
    const Vec2 d = seg.b - seg.a;
    const double len2 = dot(d, d);
    const double t = std::clamp(dot(p - seg.a, d) / len2, 0.0, 1.0);
    const Vec2 q = seg.a + t * d;
    Track::Nearest n;
    n.distance = norm(p - q);
    n.lateral = cross(d, p - seg.a) >= 0.0 ? n.distance : -n.distance;
    n.tangent = std::atan2(d.y, d.x);
    n.s = seg.s0 + t * seg.length;
    return n;
}

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

Track::Nearest nearest_on_arc(const Track::Segment& seg, Vec2 p, bool with_s)
{
    const Vec2 v = p - seg.a;
    const double r = norm(v);
    const double dir = seg.sweep >= 0.0 ? 1.0 : -1.0;
    const Vec2 start = unit(seg.start);
    const Vec2 end = unit(seg.start + seg.sweep);
    Track::Nearest n;
    const bool inside = r > 0.0 && dir * cross(start, v) >= 0.0 && dir * cross(v, end) >= 0.0;
    if (inside) {
        n.distance = std::abs(r - seg.radius);
        n.lateral = dir * (seg.radius - r);
        const double ang = std::atan2(v.y, v.x);
        n.tangent = wrap_angle(ang + dir * pi / 2.0);
        if (with_s)
            n.s = seg.s0 + seg.radius * std::abs(wrap_angle(ang - seg.start));
        return n;
    }
    // Outside the angular span: nearest is an endpoint.
    const Vec2 p0 = seg.a + seg.radius * start;
    const Vec2 p1 = seg.a + seg.radius * end;
    const double d0 = norm(p - p0);
    const double d1 = norm(p - p1);
    const bool first = d0 <= d1;
    const double ang = first ? seg.start : seg.start + seg.sweep;
    n.distance = first ? d0 : d1;
    n.tangent = wrap_angle(ang + dir * pi / 2.0);
    const Vec2 along = unit(n.tangent);
    n.lateral = cross(along, p - (first ? p0 : p1)) >= 0.0 ? n.distance : -n.distance;
    n.s = first ? seg.s0 : seg.s0 + seg.length;
    return n;
}

}  // namespace

Track::Nearest Track::nearest(Vec2 p) const
{
    Nearest best;
    best.distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& seg = segments_[i];
        Nearest n = seg.kind == Segment::Kind::Line ? nearest_on_line(seg, p)
                                                    : nearest_on_arc(seg, p, true);
        if (n.distance < best.distance) {
            best = n;
            best.segment = i;
        }
    }
    return best;
}

double Track::lateral_offset(Vec2 p) const
{
    double best_d = std::numeric_limits<double>::infinity();
    double lateral = 0.0;
    for (const auto& seg : segments_) {
        const Nearest n = seg.kind == Segment::Kind::Line ? nearest_on_line(seg, p)
                                                          : nearest_on_arc(seg, p, false);
        if (n.distance < best_d) {
            best_d = n.distance;
            lateral = n.lateral;
        }
    }
    return lateral;
}

double Track::arc_length(Vec2 p) const { return nearest(p).s; }

Pose Track::pose_at(double s) const
{
    s = std::fmod(s, length_);
    if (s < 0.0)
        s += length_;
    for (const auto& seg : segments_) {
        if (s > seg.s0 + seg.length)
            continue;
        const double t = (s - seg.s0) / seg.length;
        if (seg.kind == Segment::Kind::Line) {
            const Vec2 q = seg.a + t * (seg.b - seg.a);
            return {q.x, q.y, std::atan2(seg.b.y - seg.a.y, seg.b.x - seg.a.x)};
        }
        const double ang = seg.start + t * seg.sweep;
        const Vec2 q = seg.a + seg.radius * unit(ang);
        const double dir = seg.sweep >= 0.0 ? 1.0 : -1.0;
        return {q.x, q.y, wrap_angle(ang + dir * pi / 2.0)};
    }
    const auto& last = segments_.back();
    return pose_at(last.s0 + last.length - 1e-12);
}

TrackErrors track_errors(const Pose& pose, const Track& track)
{
    const auto n = track.nearest({pose.x, pose.y});
    return {n.distance, degrees(std::abs(wrap_angle(pose.heading - n.tangent)))};
}

// -- lane following ---------------------------------------------------------

LaneState lane_start_state(const LaneParams& p, const Track& track)
{
    LaneState st;
    st.pose = track.pose_at(p.start_s);
    st.linear_speed = p.linear_speed;
    st.errors = track_errors(st.pose, track);
    return st;
}

LaneStep lane_step(LaneState& st, double steering, double dt, const LaneParams& p,
                   const Track& track)
{
    const double v = st.linear_speed;
    const double omega = v / p.wheelbase * std::tan(radians(steering));
    auto& pose = st.pose;
    if (std::abs(omega) < 1e-12) {
        pose.x += v * std::cos(pose.heading) * dt;
        pose.y += v * std::sin(pose.heading) * dt;
    } else {
        const double h1 = pose.heading + omega * dt;
        pose.x += v / omega * (std::sin(h1) - std::sin(pose.heading));
        pose.y += v / omega * (std::cos(pose.heading) - std::cos(h1));
        pose.heading = wrap_angle(h1);
    }
    st.errors = track_errors(pose, track);
    LaneStep out;
    out.errors = st.errors;
    if (st.errors.d_err > p.lane_width / 2.0 + p.margin) {
        out.off_track = true;
        out.reset = true;
        st = lane_start_state(p, track);
    }
    return out;
}

double lane_reward(double beta_err, double d_err)
{
    return std::exp(-0.03 * beta_err * beta_err) * std::exp(-70.0 * d_err * d_err);
}

}  // namespace spore::env
