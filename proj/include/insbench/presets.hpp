#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "insbench/scenario.hpp"

namespace insbench::bench {

// ---------------------------------------------------------------------------
// Mission geometry. Durations follow the published missions (20 s / 48 s /
// 71 s and the 35 s mixed flight); radii, speeds and start offsets are this
// bench's canonical choices. Start points sit away from the local-frame
// datum, as they would after a transit from the home point.
// ---------------------------------------------------------------------------

namespace detail {

inline double arc_duration_snapped(double sweep_rad, double speed, double radius) {
  const double d = sweep_rad * radius / speed;
  return std::round(d * traj::kImuRateHz) / traj::kImuRateHz;
}

inline TrajectoryConfig straight_mission() {
  TrajectoryConfig t;
  t.start_pos = Eigen::Vector3d(60.0, -80.0, -30.0);
  t.segments.push_back({traj::SegmentKind::StraightLine, 5.0, 20.0, 0.0, 0.0, +1, 0.0});
  return t;
}

inline TrajectoryConfig spiral_mission() {
  TrajectoryConfig t;
  t.start_pos = Eigen::Vector3d(90.0, 60.0, -40.0);
  t.segments.push_back({traj::SegmentKind::Spiral, 2.5, 48.0, std::nullopt, 15.0, +1, 0.5});
  return t;
}

inline TrajectoryConfig ushape_mission() {
  TrajectoryConfig t;
  t.start_pos = Eigen::Vector3d(45.0, -90.0, -15.0);
  const double v = 1.0, r = 10.0;
  const double arc = arc_duration_snapped(M_PI, v, r);  // 180 degrees
  t.segments.push_back({traj::SegmentKind::StraightLine, v, 20.0, 0.0, 0.0, +1, 0.0});
  t.segments.push_back({traj::SegmentKind::CircularArc, v, arc, std::nullopt, r, +1, 0.0});
  t.segments.push_back({traj::SegmentKind::StraightLine, v, 71.0 - 20.0 - arc, std::nullopt, 0.0, +1, 0.0});
  return t;
}

inline TrajectoryConfig ablation_mission() {
  TrajectoryConfig t;
  t.start_pos = Eigen::Vector3d(50.0, -60.0, -25.0);
  t.segments.push_back({traj::SegmentKind::StraightLine, 2.0, 20.0, 0.0, 0.0, +1, 0.0});
  t.segments.push_back({traj::SegmentKind::CircularArc, 2.0, 15.0, std::nullopt, 16.0, +1, 0.0});
  return t;
}

inline TrajectoryConfig study_linear_mission() {
  TrajectoryConfig t;
  t.start_pos = Eigen::Vector3d(40.0, 40.0, -20.0);
  t.segments.push_back({traj::SegmentKind::StraightLine, 5.0, 30.0, 0.0, 0.0, +1, 0.0});
  return t;
}

inline TrajectoryConfig study_circular_mission() {
  TrajectoryConfig t;
  t.start_pos = Eigen::Vector3d(40.0, 40.0, -20.0);
  t.segments.push_back({traj::SegmentKind::CircularArc, 5.0, 30.0, std::nullopt, 6.0, +1, 0.0});
  return t;
}

inline TrajectoryConfig sweep_linear_mission() {
  TrajectoryConfig t;
  t.start_pos = Eigen::Vector3d(200.0, -150.0, -30.0);
  t.segments.push_back({traj::SegmentKind::StraightLine, 5.0, 45.0, 0.0, 0.0, +1, 0.0});
  return t;
}

inline TrajectoryConfig sweep_arc_mission() {
  TrajectoryConfig t;
  t.start_pos = Eigen::Vector3d(200.0, -150.0, -30.0);
  t.segments.push_back({traj::SegmentKind::CircularArc, 5.0, 45.0, std::nullopt, 300.0, +1, 0.0});
  return t;
}

// Sensor grades per study. GNSS velocity noise sets how cleanly the
// attacker's differenced-velocity trigger separates motion states, so the
// missions that exercise the SSD trigger use the tighter receivers.
inline sensors::SensorParams mission_sensors(double vel_std) {
  sensors::SensorParams p;
  p.gnss_pos_std = 3.0;
  p.gnss_vel_std = vel_std;
  return p;
}

// High-gain tuning: the filter leans on GNSS (large position process
// noise), which is the regime the attack analysis targets. r values match
// the mission sensor grade; the pos/vel cross term feeds position
// innovations into the velocity channel.
inline FilterTuning high_gain_tuning(double r_vel, double q_vel, double q_pos_vel) {
  FilterTuning f;
  f.q_att = 6.25e-6;
  f.q_pos = 142.0;
  f.q_vel = q_vel;
  f.q_pos_vel = q_pos_vel;
  f.r_pos = 9.0;
  f.r_vel = r_vel;
  f.p0_pos = 400.0;
  f.p0_vel = 0.25;
  return f;
}

}  // namespace detail

inline ScenarioConfig make_preset(const std::string& name);

inline std::vector<std::string> preset_names() {
  return {
      "traj1-clean", "traj1-ssd", "traj1-bias", "traj1-mult",
      "traj2-clean", "traj2-ssd", "traj2-bias", "traj2-mult",
      "traj3-clean", "traj3-ssd", "traj3-bias", "traj3-mult",
      "ablation-baseline", "ablation-spa", "ablation-sva", "ablation-cca", "ablation-swap",
      "finding1-linear", "finding1-circular",
      "finding2-pos-linear", "finding2-pos-circular",
      "finding2-vel-linear", "finding2-vel-circular",
      "sweep-pos", "sweep-vel",
  };
}

inline ScenarioConfig make_preset(const std::string& name) {
  ScenarioConfig c;
  c.name = name;

  auto mission_duration = [&]() {
    double d = 0.0;
    for (const auto& s : c.trajectory.segments) d += s.duration;
    return d;
  };
  auto full_window = [&]() { c.attack.window = {0.0, mission_duration()}; };
  auto mid_window = [&]() { c.attack.window = {8.0, mission_duration() - 8.0}; };

  auto bias_payload = [&]() {
    c.attack.kind = AttackSelector::Bias;
    c.attack.bias_in_degrees = true;
    c.attack.bias_low = 0.0;
    c.attack.bias_high = 0.0005;  // degrees
    mid_window();
  };
  auto mult_payload = [&]() {
    c.attack.kind = AttackSelector::Multiplicative;
    c.attack.mult_factor = 1.5;
    mid_window();
  };
  auto ssd_payload = [&](double eps, attacks::SsdMode mode, bool positive_only) {
    c.attack.kind = AttackSelector::Ssd;
    c.attack.ssd.theta = 20.0;
    c.attack.ssd.alpha = 11.0;
    c.attack.ssd.phi = 0.08;
    c.attack.ssd.trigger_eps = eps;
    c.attack.ssd_mode = mode;
    c.attack.ssd_positive_accel_only = positive_only;
    full_window();
    c.attack.ssd.window = c.attack.window;
  };

  // --- Mission I: straight line, 20 s at 5 m/s ---
  if (name.rfind("traj1-", 0) == 0) {
    c.trajectory = detail::straight_mission();
    c.sensor_params = detail::mission_sensors(0.025);
    c.filter = detail::high_gain_tuning(6.25e-4, 2e-3, 0.42);
    if (name == "traj1-clean") return c;
    if (name == "traj1-ssd") { ssd_payload(0.15, attacks::SsdMode::Full, false); return c; }
    if (name == "traj1-bias") { bias_payload(); return c; }
    if (name == "traj1-mult") { mult_payload(); return c; }
  }

  // --- Mission II: spiral, 48 s, radius 15 m, climb 0.5 m/s ---
  if (name.rfind("traj2-", 0) == 0) {
    c.trajectory = detail::spiral_mission();
    c.sensor_params = detail::mission_sensors(0.025);
    FilterTuning f;
    f.q_att = 6.25e-6;
    f.q_pos = 0.2;   // low-gain: position rides the inertial solution
    f.q_vel = 2e-3;
    f.r_pos = 100.0;
    f.r_vel = 6.25e-4;
    f.p0_pos = 400.0;
    f.p0_vel = 0.25;
    c.filter = f;
    if (name == "traj2-clean") return c;
    if (name == "traj2-ssd") { ssd_payload(0.15, attacks::SsdMode::Full, true); return c; }
    if (name == "traj2-bias") { bias_payload(); return c; }
    if (name == "traj2-mult") { mult_payload(); return c; }
  }

  // --- Mission III: U-shape, 71 s (20 s leg, 180-degree arc, return leg) ---
  if (name.rfind("traj3-", 0) == 0) {
    c.trajectory = detail::ushape_mission();
    c.sensor_params = detail::mission_sensors(0.008);
    c.filter = detail::high_gain_tuning(6.4e-5, 0.01, 0.42);
    if (name == "traj3-clean") return c;
    if (name == "traj3-ssd") { ssd_payload(0.05, attacks::SsdMode::Full, false); return c; }
    if (name == "traj3-bias") { bias_payload(); return c; }
    if (name == "traj3-mult") { mult_payload(); return c; }
  }

  // --- 35 s mixed flight for the ablation and combination studies ---
  if (name.rfind("ablation-", 0) == 0) {
    c.trajectory = detail::ablation_mission();
    c.sensor_params = detail::mission_sensors(0.025);
    FilterTuning f;
    f.q_att = 6.25e-6;
    f.q_pos = 59.0;
    f.q_vel = 1e-3;
    f.r_pos = 110.0;
    f.r_vel = 6.25e-4;
    f.p0_pos = 400.0;
    f.p0_vel = 0.25;
    c.filter = f;
    if (name == "ablation-baseline") return c;
    if (name == "ablation-spa") { ssd_payload(0.16, attacks::SsdMode::PositionOnly, false); return c; }
    if (name == "ablation-sva") { ssd_payload(0.16, attacks::SsdMode::VelocityOnly, false); return c; }
    if (name == "ablation-cca") { ssd_payload(0.16, attacks::SsdMode::Full, false); return c; }
    if (name == "ablation-swap") { ssd_payload(0.16, attacks::SsdMode::Swapped, false); return c; }
  }

  // --- Motion-state study: paired 30 s runs at 5 m/s, 2-epoch payloads ---
  if (name.rfind("finding", 0) == 0) {
    const bool circular = name.find("circular") != std::string::npos;
    c.trajectory = circular ? detail::study_circular_mission() : detail::study_linear_mission();
    sensors::SensorParams p;
    p.gnss_pos_std = 1.5;
    p.gnss_vel_std = 0.025;
    p.mag_noise_std = 0.1;  // loose yaw: attitude uncertainty drives the arc response
    c.sensor_params = p;
    FilterTuning f;
    f.q_att = 1e-4;
    f.q_pos = 1e-8;
    f.q_vel = 2e-3;
    f.r_pos = 2.25;
    f.r_vel = 6.25e-4;
    f.r_mag = 0.01;
    f.p0_att = 0.01;
    f.p0_pos = 4.0;
    f.p0_vel = 0.25;
    c.filter = f;
    if (name.rfind("finding1-", 0) == 0 || name.rfind("finding2-pos-", 0) == 0) {
      c.attack.kind = AttackSelector::Bias;
      c.attack.bias_low = 15.0;
      c.attack.bias_high = 25.0;
      c.attack.window = {10.0, 2.0};
      return c;
    }
    if (name.rfind("finding2-vel-", 0) == 0) {
      c.attack.kind = AttackSelector::VelocityBias;
      c.attack.vel_bias_low = 0.2;
      c.attack.vel_bias_high = 0.5;
      c.attack.window = {10.0, 2.0};
      return c;
    }
  }

  // --- Parameter sweep bases (positional on a long leg, velocity on a
  //     gentle arc) ---
  if (name == "sweep-pos") {
    c.trajectory = detail::sweep_linear_mission();
    c.sensor_params = detail::mission_sensors(0.008);
    c.filter = detail::high_gain_tuning(6.4e-5, 2e-3, 0.0);
    ssd_payload(0.05, attacks::SsdMode::PositionOnly, false);
    return c;
  }
  if (name == "sweep-vel") {
    c.trajectory = detail::sweep_arc_mission();
    c.sensor_params = detail::mission_sensors(0.008);
    c.filter = detail::high_gain_tuning(6.4e-5, 2e-3, 0.0);
    ssd_payload(0.05, attacks::SsdMode::VelocityOnly, false);
    return c;
  }

  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace insbench::bench
