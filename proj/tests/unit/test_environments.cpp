#include "spore/environments.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spore;
using namespace spore::env;

TEST_CASE("zero command leaves the ball in place")
{
    ReachingParams p;
    Rng rng(1);
    ReachingState st{{4.0, -3.0}, {}};
    const auto step = reaching_step(st, {0.0, 0.0}, 1e-3, p, rng);
    CHECK(st.ball_pos == Vec2{4.0, -3.0});
    CHECK_FALSE(step.reached);
}

TEST_CASE("walls clamp the ball inside the plane")
{
    ReachingParams p;
    Rng rng(1);
    ReachingState st{{9.9, 0.0}, {}};
    for (int i = 0; i < 1000; ++i)
        reaching_step(st, {1.0, 0.0}, 1e-3, p, rng);
    CHECK(st.ball_pos.x == 10.0 - p.ball_radius);
    CHECK(st.ball_pos.y == 0.0);
}

TEST_CASE("realized velocity loses the component blocked by a wall")
{
    ReachingParams p;
    Rng rng(1);
    const double half = 10.0 - p.ball_radius;
    ReachingState st{{half, 3.0}, {}};
    const auto step = reaching_step(st, {2.0, -1.0}, 1e-3, p, rng);
    CHECK(step.velocity.x == 0.0);
    CHECK(step.velocity.y == doctest::Approx(-1.0).epsilon(1e-9));

    ReachingState free{{1.0, 4.0}, {}};
    const auto moving = reaching_step(free, {0.5, -0.25}, 1e-3, p, rng);
    CHECK(moving.velocity.x == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(moving.velocity.y == doctest::Approx(-0.25).epsilon(1e-9));

    // Pushing straight into the wall earns nothing.
    ReachingState pinned{{half, 0.0}, {}};
    const auto stuck = reaching_step(pinned, {3.0, 0.0}, 1e-3, p, rng);
    CHECK(reaching_reward(ReachingState{{half, 0.0}, {}}, stuck.velocity, p.beta_lim, p.v_lim) == 0.0);
}

TEST_CASE("entering the goal resets the ball away from it")
{
    ReachingParams p;
    Rng rng(3);
    ReachingState st{{0.0, 0.0}, {}};
    const auto step = reaching_step(st, {0.0, 0.0}, 1e-3, p, rng);
    CHECK(step.reached);
    CHECK(step.reset);
    CHECK(norm(st.ball_pos) >= p.goal_radius + p.reset_clearance);
}

TEST_CASE("reset positions are uniform on the allowed region")
{
    ReachingParams p;
    Rng rng(11);
    const double half = p.plane_size / 2.0 - p.ball_radius;
    const int n = 40000;
    int left = 0, top = 0;
    double sum_x = 0.0, sum_y = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto v = random_ball_position(p, rng);
        REQUIRE(std::abs(v.x) <= half);
        REQUIRE(std::abs(v.y) <= half);
        REQUIRE(norm(v) >= p.goal_radius + p.reset_clearance);
        left += v.x < 0.0;
        top += v.y > 0.0;
        sum_x += v.x;
        sum_y += v.y;
    }
    // Symmetric region: halves within 4 standard errors of n/2.
    const double se = std::sqrt(n * 0.25);
    CHECK(std::abs(left - n / 2.0) < 4 * se);
    CHECK(std::abs(top - n / 2.0) < 4 * se);
    CHECK(std::abs(sum_x / n) < 4 * half / std::sqrt(3.0 * n));
    CHECK(std::abs(sum_y / n) < 4 * half / std::sqrt(3.0 * n));
}

TEST_CASE("reaching reward point values")
{
    ReachingState st{{5.0, 0.0}, {}};
    // Heading straight at the goal at 1 m/s.
    CHECK(reaching_reward(st, {-1.0, 0.0}, 45.0, 0.1) == doctest::Approx(1120.0).epsilon(1e-12));
    // Perpendicular: beta_err = 90 >= beta_lim.
    CHECK(reaching_reward(st, {0.0, 1.0}, 45.0, 0.1) == doctest::Approx(35.0).epsilon(1e-12));
    // Too slow.
    CHECK(reaching_reward(st, {-0.09, 0.0}, 45.0, 0.1) == 0.0);
    CHECK(reaching_reward(st, {0.0, 0.0}, 45.0, 0.1) == 0.0);
    // Half the angular limit: 35 * sqrt(4) * 1.5^5.
    const double a = radians(22.5);
    CHECK(reaching_reward(st, {-4.0 * std::cos(a), 4.0 * std::sin(a)}, 45.0, 0.1) ==
          doctest::Approx(35.0 * 2.0 * std::pow(1.5, 5)).epsilon(1e-9));
}

TEST_CASE("reaching reward monotonicity")
{
    Rng rng(4);
    for (int i = 0; i < 5000; ++i) {
        ReachingState st{{rng.uniform(-8, 8), rng.uniform(-8, 8)}, {}};
        const double ang = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const double s1 = rng.uniform(0.11, 10.0), s2 = s1 + rng.uniform(0.0, 5.0);
        const Vec2 d{std::cos(ang), std::sin(ang)};
        const double r1 = reaching_reward(st, s1 * d, 45.0, 0.1);
        const double r2 = reaching_reward(st, s2 * d, 45.0, 0.1);
        CHECK(r1 >= 0.0);
        CHECK(r2 >= r1);
        // Rotating further from the goal direction never increases reward.
        const Vec2 goal_dir = (-1.0 / norm(st.ball_pos)) * st.ball_pos;
        const double e1 = rng.uniform(0.0, 45.0), e2 = e1 + rng.uniform(0.0, 45.0 - e1);
        auto rotate = [](Vec2 v, double deg) {
            const double r = radians(deg);
            return Vec2{v.x * std::cos(r) - v.y * std::sin(r), v.x * std::sin(r) + v.y * std::cos(r)};
        };
        CHECK(reaching_reward(st, s1 * rotate(goal_dir, e2), 45.0, 0.1) <=
              reaching_reward(st, s1 * rotate(goal_dir, e1), 45.0, 0.1) * (1.0 + 1e-12));
    }
}

TEST_CASE("lane reward point values and shape")
{
    CHECK(lane_reward(0.0, 0.0) == 1.0);
    CHECK(lane_reward(0.0, 0.1) == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));
    CHECK(lane_reward(5.0, 0.0) == doctest::Approx(std::exp(-0.75)).epsilon(1e-12));
    Rng rng(8);
    for (int i = 0; i < 5000; ++i) {
        const double b = rng.uniform(0.0, 20.0), d = rng.uniform(0.0, 0.3);
        const double r = lane_reward(b, d);
        CHECK(r > 0.0);
        CHECK(r <= 1.0);
        CHECK(lane_reward(b + 0.5, d) < r);
        CHECK(lane_reward(b, d + 0.01) < r);
    }
}

TEST_CASE("track errors on the centerline")
{
    const auto track = Track::rounded_rectangle(10.0, 2.0);
    CHECK(track.length() == doctest::Approx(20.0 + 4.0 * std::numbers::pi));
    const auto p = track.pose_at(3.0);
    auto e = track_errors(p, track);
    CHECK(e.d_err < 1e-12);
    CHECK(e.beta_err < 1e-9);

    Pose off = p;
    off.y += 0.05;  // first straight runs along +x
    e = track_errors(off, track);
    CHECK(e.d_err == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(e.beta_err < 1e-9);

    Pose back = p;
    back.heading += std::numbers::pi;
    e = track_errors(back, track);
    CHECK(e.d_err < 1e-12);
    CHECK(e.beta_err == doctest::Approx(180.0));
}

TEST_CASE("pose_at walks the closed centerline")
{
    const auto track = Track::rounded_rectangle(10.0, 2.0);
    Rng rng(6);
    for (int i = 0; i < 2000; ++i) {
        const double s = rng.uniform(0.0, track.length());
        const auto p = track.pose_at(s);
        const auto near = track.nearest({p.x, p.y});
        CHECK(near.distance < 1e-9);
        CHECK(std::abs(wrap_angle(near.tangent - p.heading)) < 1e-9);
        CHECK(track.arc_length({p.x, p.y}) == doctest::Approx(s).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("equidistant nearest points resolve to the lowest segment")
{
    const auto track = Track::rounded_rectangle(10.0, 2.0);
    // Center of the circuit is equidistant from both straights (segments 0 and 2).
    const auto near = track.nearest({0.0, 0.0});
    CHECK(near.distance == doctest::Approx(2.0));
    CHECK(near.segment == 0);
}

TEST_CASE("driving straight along a straight keeps the errors")
{
    LaneParams p;
    const auto track = Track::rounded_rectangle(p.straight, p.radius);
    auto st = lane_start_state(p, track);
    st.pose.y += 0.03;
    st.errors = track_errors(st.pose, track);
    const auto before = st.errors;
    for (int i = 0; i < 1000; ++i) {
        const auto step = lane_step(st, 0.0, 1e-3, p, track);
        REQUIRE_FALSE(step.reset);
    }
    CHECK(st.errors.d_err == doctest::Approx(before.d_err).epsilon(1e-9));
    CHECK(st.errors.beta_err == doctest::Approx(before.beta_err).scale(1.0).epsilon(1e-9));
}

TEST_CASE("constant steering traces a closed circle")
{
    LaneParams p;
    p.margin = 1e9;  // never leave the lane for this test
    const auto track = Track::rounded_rectangle(p.straight, p.radius);
    auto st = lane_start_state(p, track);
    const Pose start = st.pose;
    const double radius = p.wheelbase / std::tan(radians(15.0));
    const double period = 2.0 * std::numbers::pi * radius / p.linear_speed;
    const double dt = period / 20000.0;
    double max_dist = 0.0;
    const Vec2 center{start.x - radius * std::sin(start.heading), start.y + radius * std::cos(start.heading)};
    for (int i = 0; i < 20000; ++i) {
        lane_step(st, 15.0, dt, p, track);
        max_dist = std::max(max_dist, std::abs(norm(Vec2{st.pose.x, st.pose.y} - center) - radius));
    }
    CHECK(norm(Vec2{st.pose.x - start.x, st.pose.y - start.y}) < 1e-6);
    CHECK(max_dist < 1e-9);
}

TEST_CASE("leaving the lane resets to the start pose")
{
    LaneParams p;
    const auto track = Track::rounded_rectangle(p.straight, p.radius);
    auto st = lane_start_state(p, track);
    const auto start = st;
    bool reset = false;
    for (int i = 0; i < 100000 && !reset; ++i) {
        const auto step = lane_step(st, 30.0, 1e-3, p, track);
        if (step.reset) {
            reset = true;
            CHECK(step.off_track);
            CHECK(step.errors.d_err > p.lane_width / 2.0 + p.margin);
        }
    }
    REQUIRE(reset);
    CHECK(st.pose.x == start.pose.x);
    CHECK(st.pose.y == start.pose.y);
    CHECK(st.pose.heading == start.pose.heading);
    CHECK(st.linear_speed == p.linear_speed);
}
