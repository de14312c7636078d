#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <random>

#include "insbench/trajectory.hpp"

using namespace insbench;
using traj::MotionSegment;
using traj::SegmentKind;
using traj::TrajectorySample;
using Eigen::Vector3d;

namespace {

// Independent check: central-difference velocity from positions against the
// stored analytic velocity at every interior sample.
double max_fd_velocity_error(const traj::Trajectory& t) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < t.samples.size(); ++i) {
    const Vector3d fd =
        (t.samples[i + 1].pos - t.samples[i - 1].pos) / (t.samples[i + 1].t - t.samples[i - 1].t);
    worst = std::max(worst, (fd - t.samples[i].vel).norm());
  }
  return worst;
}

TrajectorySample origin_north() {
  TrajectorySample s;
  s.attitude = traj::yaw_attitude(0.0);
  return s;
}

}  // namespace

TEST_CASE("straight line at 2 m/s reaches (20,0,0) after 10 s") {
  MotionSegment seg{SegmentKind::StraightLine, 2.0, 20.0, 0.0, 0.0, +1, 0.0};
  const auto t = traj::build_segment(seg, origin_north());
  const std::size_t i = static_cast<std::size_t>(10.0 * traj::kImuRateHz);
  REQUIRE(t.samples[i].t == Catch::Approx(10.0));
  REQUIRE(t.samples[i].pos.x() == Catch::Approx(20.0).margin(1e-9));
  REQUIRE(t.samples[i].pos.y() == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(t.samples[i].pos.z() == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("quarter-period arc turns 90 degrees with 0.4 m/s^2 centripetal accel") {
  const double quarter = M_PI * 10.0 / (2.0 * 2.0);
  MotionSegment seg{SegmentKind::CircularArc, 2.0, quarter, std::nullopt, 10.0, +1, 0.0};
  const auto t = traj::build_segment(seg, origin_north());
  for (const auto& s : t.samples) REQUIRE(s.accel.norm() == Catch::Approx(0.4).margin(1e-12));
  const auto& v_end = t.samples.back().vel;
  const double heading_end = std::atan2(v_end.y(), v_end.x());
  // duration snaps to the 1/160 s grid, so allow the snap-induced slack
  REQUIRE(std::abs(traj::wrap_angle(heading_end - M_PI / 2.0)) < 2e-3);
}

TEST_CASE("mission I geometry: 20 s at 5 m/s") {
  MotionSegment seg{SegmentKind::StraightLine, 5.0, 20.0, 0.0, 0.0, +1, 0.0};
  const auto t = traj::build_segment(seg, origin_north());
  REQUIRE(t.samples.size() == 3201);
  REQUIRE(t.duration() == Catch::Approx(20.0));
  REQUIRE((t.samples.back().pos - Vector3d(100, 0, 0)).norm() < 1e-9);
}

TEST_CASE("build_segment rejects invalid specs") {
  REQUIRE_THROWS_AS(
      traj::build_segment({SegmentKind::StraightLine, 2.0, -1.0, 0.0, 0.0, +1, 0.0}, origin_north()),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      traj::build_segment({SegmentKind::CircularArc, 2.0, 5.0, std::nullopt, 0.0, +1, 0.0},
                          origin_north()),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      traj::build_segment({SegmentKind::StraightLine, -2.0, 5.0, 0.0, 0.0, +1, 0.0}, origin_north()),
      std::invalid_argument);
}

TEST_CASE("35 s mixed flight composes with a waypoint at the 20 s boundary") {
  std::vector<MotionSegment> segs = {
      {SegmentKind::StraightLine, 2.0, 20.0, 0.0, 0.0, +1, 0.0},
      {SegmentKind::CircularArc, 2.0, 15.0, std::nullopt, 16.0, +1, 0.0}};
  const auto t = traj::compose(segs, origin_north());
  REQUIRE(t.duration() == Catch::Approx(35.0));
  REQUIRE(t.waypoints.size() == 3);
  REQUIRE(t.waypoints[1].index == 3200);
  REQUIRE(t.waypoints[1].pos == t.samples[3200].pos);
  // position and velocity direction continuous across the boundary
  REQUIRE(max_fd_velocity_error(t) < 1e-3);
}

TEST_CASE("single-segment compose equals build_segment with two waypoints") {
  MotionSegment seg{SegmentKind::Spiral, 2.5, 12.0, std::nullopt, 15.0, +1, 0.5};
  TrajectorySample start = origin_north();
  start.vel = Vector3d(2.5, 0, 0);
  const auto a = traj::build_segment(seg, start);
  const auto b = traj::compose({seg}, start);
  REQUIRE(b.waypoints.size() == 2);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    REQUIRE(a.samples[i].pos == b.samples[i].pos);
    REQUIRE(a.samples[i].vel == b.samples[i].vel);
    REQUIRE(a.samples[i].accel == b.samples[i].accel);
  }
}

TEST_CASE("71 s U-shape: four waypoints, mixed motion classes") {
  const double v = 1.0, r = 10.0;
  const double arc = std::round(M_PI * r / v * traj::kImuRateHz) / traj::kImuRateHz;
  std::vector<MotionSegment> segs = {
      {SegmentKind::StraightLine, v, 20.0, 0.0, 0.0, +1, 0.0},
      {SegmentKind::CircularArc, v, arc, std::nullopt, r, +1, 0.0},
      {SegmentKind::StraightLine, v, 71.0 - 20.0 - arc, std::nullopt, 0.0, +1, 0.0}};
  const auto t = traj::compose(segs, origin_north());
  REQUIRE(t.duration() == Catch::Approx(71.0));
  REQUIRE(t.waypoints.size() == 4);
  bool has_linear = false, has_nonlinear = false;
  for (auto m : t.motion) {
    has_linear |= m == traj::MotionClass::Linear;
    has_nonlinear |= m == traj::MotionClass::Nonlinear;
  }
  REQUIRE(has_linear);
  REQUIRE(has_nonlinear);
  // the return leg heads back south
  REQUIRE(t.samples.back().vel.x() == Catch::Approx(-1.0).margin(1e-3));
}

TEST_CASE("compose validation: empty list and broken chaining") {
  REQUIRE_THROWS_AS(traj::compose({}), std::invalid_argument);
  std::vector<MotionSegment> segs = {
      {SegmentKind::StraightLine, 2.0, 5.0, 0.0, 0.0, +1, 0.0},
      {SegmentKind::StraightLine, 2.0, 5.0, 1.0 /* 57 deg kink */, 0.0, +1, 0.0}};
  REQUIRE_THROWS_AS(traj::compose(segs, origin_north()), std::invalid_argument);
}

TEST_CASE("acceleration_at: analytic values and closed-left boundaries") {
  std::vector<MotionSegment> segs = {
      {SegmentKind::StraightLine, 2.0, 10.0, 0.0, 0.0, +1, 0.0},
      {SegmentKind::CircularArc, 2.0, 10.0, std::nullopt, 10.0, +1, 0.0}};
  const auto t = traj::compose(segs, origin_north());

  REQUIRE(traj::acceleration_at(t, 3.7).norm() == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(traj::acceleration_at(t, 15.0).norm() == Catch::Approx(0.4).margin(1e-12));
  // boundary belongs to the arc that begins there
  const Vector3d a_boundary = traj::acceleration_at(t, 10.0);
  REQUIRE(a_boundary.norm() == Catch::Approx(0.4).margin(1e-12));
  // and matches the right-side finite difference of the stored velocities
  const std::size_t ib = 1600;
  const Vector3d fd_right =
      (t.samples[ib + 1].vel - t.samples[ib].vel) / (t.samples[ib + 1].t - t.samples[ib].t);
  REQUIRE((a_boundary - fd_right).norm() < 5e-3);
  REQUIRE_THROWS_AS(traj::acceleration_at(t, -0.1), std::out_of_range);
  REQUIRE_THROWS_AS(traj::acceleration_at(t, 20.5), std::out_of_range);
}

TEST_CASE("property: finite-difference velocity matches stored velocity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uspeed(0.5, 6.0), udur(2.0, 8.0), urad(5.0, 40.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<MotionSegment> segs;
    const int n = 1 + static_cast<int>(rng() % 4);
    const double speed = uspeed(rng);  // shipped missions fly constant speed
    // mission-grade turn rates: boundary acceleration jumps stay <= 0.6,
    // which is what the 1e-3 finite-difference tolerance assumes
    auto radius = [&]() { return std::max(urad(rng), speed * speed / 0.6); };
    for (int k = 0; k < n; ++k) {
      switch (rng() % 3) {
        case 0:
          segs.push_back({SegmentKind::StraightLine, speed, udur(rng),
                          k == 0 ? std::optional<double>(0.3) : std::nullopt, 0.0, +1, 0.0});
          break;
        case 1:
          segs.push_back({SegmentKind::CircularArc, speed, udur(rng), std::nullopt,
                          radius(), rng() % 2 ? +1 : -1, 0.0});
          break;
        default:
          // climb only on single-segment chains: vertical velocity must
          // stay continuous across boundaries
          segs.push_back({SegmentKind::Spiral, speed, udur(rng), std::nullopt, radius(),
                          rng() % 2 ? +1 : -1, n == 1 ? 0.8 : 0.0});
          break;
      }
    }
    const auto t = traj::compose(segs, origin_north());
    REQUIRE(max_fd_velocity_error(t) < 1e-3);
    REQUIRE(t.waypoints.size() == segs.size() + 1);
    // constant sample step
    for (std::size_t i = 1; i < t.samples.size(); ++i)
      REQUIRE(std::abs((t.samples[i].t - t.samples[i - 1].t) - traj::kImuDt) < 1e-12);
    // attitude stays unit-norm
    for (const auto& s : t.samples) REQUIRE(std::abs(s.attitude.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("motion class: linear iff straight/hover, nonlinear on moving arcs") {
  std::vector<MotionSegment> segs = {
      {SegmentKind::Hover, 0.0, 2.0, 0.4, 0.0, +1, 0.0},
      {SegmentKind::StraightLine, 3.0, 4.0, 0.4, 0.0, +1, 0.0},
      {SegmentKind::CircularArc, 3.0, 4.0, std::nullopt, 12.0, +1, 0.0},
      {SegmentKind::Spiral, 3.0, 4.0, std::nullopt, 12.0, +1, 0.5}};
  const auto t = traj::compose(segs, origin_north());
  for (std::size_t k = 0; k < t.segments.size(); ++k) {
    const auto& span = t.segments[k];
    const bool expect_linear = k < 2;
    // probe strictly inside the span (boundaries belong to the next segment)
    const std::size_t i0 = span.i_begin + 1;
    const std::size_t i1 = span.i_begin + static_cast<std::size_t>(span.seg.duration / traj::kImuDt) - 1;
    for (std::size_t i : {i0, (i0 + i1) / 2, i1}) {
      if (expect_linear)
        REQUIRE(t.motion[i] == traj::MotionClass::Linear);
      else
        REQUIRE(t.motion[i] == traj::MotionClass::Nonlinear);
    }
  }
}

TEST_CASE("determinism: identical specs give bit-identical trajectories") {
  std::vector<MotionSegment> segs = {
      {SegmentKind::StraightLine, 2.0, 6.0, 0.0, 0.0, +1, 0.0},
      {SegmentKind::CircularArc, 2.0, 7.0, std::nullopt, 9.0, -1, 0.0}};
  const auto a = traj::compose(segs, origin_north());
  const auto b = traj::compose(segs, origin_north());
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    REQUIRE(std::memcmp(a.samples[i].pos.data(), b.samples[i].pos.data(), 3 * sizeof(double)) == 0);
    REQUIRE(std::memcmp(a.samples[i].vel.data(), b.samples[i].vel.data(), 3 * sizeof(double)) == 0);
  }
}
