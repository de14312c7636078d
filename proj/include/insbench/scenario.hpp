#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "insbench/attacks.hpp"
#include "insbench/detectors.hpp"
#include "insbench/ekf.hpp"
#include "insbench/sensors.hpp"
#include "insbench/trajectory.hpp"

namespace insbench::bench {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct TrajectoryConfig {
  Eigen::Vector3d start_pos = Eigen::Vector3d::Zero();
  double start_heading = 0.0;  // rad
  std::vector<traj::MotionSegment> segments;
};

/// Filter noise tuning in per-block form. Q is assembled as a 22x22 rate
/// matrix (added as Q*dt each prediction); pos_vel couples the position and
/// velocity blocks and must satisfy pos_vel^2 <= q_pos * q_vel.
struct FilterTuning {
  double q_att = 6.25e-6;
  double q_pos = 1e-8;
  double q_vel = 1.56e-5;
  double q_pos_vel = 0.0;
  double q_gyro_bias = 1e-12;
  double q_accel_bias = 1e-12;
  double q_geo = 1e-12;
  double q_mag_bias = 1e-12;
  double r_pos = 0.25;    // GNSS position variance, m^2
  double r_vel = 0.01;    // GNSS velocity variance, (m/s)^2
  double r_mag = 1e-4;
  double p0_att = 1e-4;
  double p0_pos = 1.0;
  double p0_vel = 0.04;
  double p0_gyro_bias = 1e-8;
  double p0_accel_bias = 1e-8;
  double p0_geo = 1e-6;
  double p0_mag_bias = 1e-6;

  void validate() const {
    const double vals[] = {q_att, q_pos, q_vel, q_gyro_bias, q_accel_bias, q_geo, q_mag_bias,
                           r_pos, r_vel, r_mag, p0_att, p0_pos, p0_vel, p0_gyro_bias,
                           p0_accel_bias, p0_geo, p0_mag_bias};
    for (double v : vals)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("FilterTuning: variances must be finite and >= 0");
    if (q_pos_vel * q_pos_vel > q_pos * q_vel + 1e-30)
      throw std::invalid_argument("FilterTuning: pos/vel cross term breaks PSD");
  }

  ekf::NoiseConfig noise() const {
    validate();
    ekf::NoiseConfig n;
    n.Q.setZero();
    for (int i = 0; i < 4; ++i) n.Q(ekf::kQ + i, ekf::kQ + i) = q_att;
    for (int i = 0; i < 3; ++i) {
      n.Q(ekf::kP + i, ekf::kP + i) = q_pos;
      n.Q(ekf::kV + i, ekf::kV + i) = q_vel;
      n.Q(ekf::kP + i, ekf::kV + i) = q_pos_vel;
      n.Q(ekf::kV + i, ekf::kP + i) = q_pos_vel;
      n.Q(ekf::kBg + i, ekf::kBg + i) = q_gyro_bias;
      n.Q(ekf::kBa + i, ekf::kBa + i) = q_accel_bias;
      n.Q(ekf::kMf + i, ekf::kMf + i) = q_geo;
      n.Q(ekf::kMb + i, ekf::kMb + i) = q_mag_bias;
    }
    n.R_gnss.setZero();
    n.R_gnss(0, 0) = n.R_gnss(1, 1) = r_pos;
    n.R_gnss(2, 2) = n.R_gnss(3, 3) = n.R_gnss(4, 4) = r_vel;
    n.R_mag = r_mag * Eigen::Matrix3d::Identity();
    return n;
  }

  ekf::Vec22 p0_diag() const {
    ekf::Vec22 d;
    for (int i = 0; i < 4; ++i) d(ekf::kQ + i) = p0_att;
    for (int i = 0; i < 3; ++i) {
      d(ekf::kP + i) = p0_pos;
      d(ekf::kV + i) = p0_vel;
      d(ekf::kBg + i) = p0_gyro_bias;
      d(ekf::kBa + i) = p0_accel_bias;
      d(ekf::kMf + i) = p0_geo;
      d(ekf::kMb + i) = p0_mag_bias;
    }
    return d;
  }
};

enum class AttackSelector { None, Bias, Multiplicative, Replacement, Ssd, VelocityBias };

inline std::string to_string(AttackSelector k) {
  switch (k) {
    case AttackSelector::None: return "none";
    case AttackSelector::Bias: return "bias";
    case AttackSelector::Multiplicative: return "multiplicative";
    case AttackSelector::Replacement: return "replacement";
    case AttackSelector::Ssd: return "ssd";
    case AttackSelector::VelocityBias: return "velocity_bias";
  }
  return "?";
}

struct AttackConfig {
  AttackSelector kind = AttackSelector::None;
  attacks::AttackWindow window{0.0, 1.0};
  // bias
  double bias_low = 0.0, bias_high = 0.0;  // meters
  bool bias_in_degrees = false;
  double ref_latitude_deg = 0.0;
  // multiplicative
  double mult_factor = 1.5;
  Eigen::Vector2d mult_origin = Eigen::Vector2d::Zero();
  // replacement
  Eigen::Vector2d repl_pos_ne = Eigen::Vector2d::Zero();
  Eigen::Vector3d repl_vel = Eigen::Vector3d::Zero();
  // ssd
  attacks::AttackParams ssd;
  attacks::SsdMode ssd_mode = attacks::SsdMode::Full;
  attacks::BiasDirection ssd_direction = attacks::BiasDirection::NorthEast;
  bool ssd_positive_accel_only = false;
  // velocity bias (study payload): per-axis uniform added to N/E velocity
  double vel_bias_low = 0.0, vel_bias_high = 0.0;  // m/s
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string name = "scenario";
  TrajectoryConfig trajectory;
  sensors::SensorParams sensor_params;
  FilterTuning filter;
  AttackConfig attack;
  detect::DetectorConfig detectors;
  std::uint64_t seed_base = 1;
  int seed_count = 30;

  void validate() const {
    if (schema_version != kSchemaVersion)
      throw std::invalid_argument("ScenarioConfig: unsupported schema_version");
    if (trajectory.segments.empty())
      throw std::invalid_argument("ScenarioConfig: trajectory needs at least one segment");
    sensor_params.validate();
    filter.validate();
    detectors.validate();
    if (attack.kind != AttackSelector::None) attack.window.validate();
    if (seed_count < 1) throw std::invalid_argument("ScenarioConfig: seed_count must be >= 1");
  }

  std::vector<std::uint64_t> seeds() const {
    std::vector<std::uint64_t> s(static_cast<std::size_t>(seed_count));
    for (int i = 0; i < seed_count; ++i) s[static_cast<std::size_t>(i)] = seed_base + static_cast<std::uint64_t>(i);
    return s;
  }
};

// ---------------------------------------------------------------------------
// JSON round trip
// ---------------------------------------------------------------------------

namespace detail {

inline json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }
inline Eigen::Vector3d vec3_from_json(const json& j) {
  return Eigen::Vector3d(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

inline const std::map<std::string, traj::SegmentKind>& segment_kinds() {
  static const std::map<std::string, traj::SegmentKind> m = {
      {"straight", traj::SegmentKind::StraightLine},
      {"arc", traj::SegmentKind::CircularArc},
      {"spiral", traj::SegmentKind::Spiral},
      {"hover", traj::SegmentKind::Hover}};
  return m;
}

inline const std::map<std::string, AttackSelector>& attack_kinds() {
  static const std::map<std::string, AttackSelector> m = {
      {"none", AttackSelector::None},
      {"bias", AttackSelector::Bias},
      {"multiplicative", AttackSelector::Multiplicative},
      {"replacement", AttackSelector::Replacement},
      {"ssd", AttackSelector::Ssd},
      {"velocity_bias", AttackSelector::VelocityBias}};
  return m;
}

}  // namespace detail

inline json to_json(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  json jt;
  jt["start_pos"] = detail::vec3_to_json(c.trajectory.start_pos);
  jt["start_heading_deg"] = c.trajectory.start_heading * 180.0 / M_PI;
  jt["segments"] = json::array();
  for (const auto& s : c.trajectory.segments) {
    json js;
    js["kind"] = traj::to_string(s.kind);
    js["speed"] = s.speed;
    js["duration"] = s.duration;
    if (s.heading) js["heading_deg"] = *s.heading * 180.0 / M_PI;
    if (s.kind == traj::SegmentKind::CircularArc || s.kind == traj::SegmentKind::Spiral) {
      js["radius"] = s.radius;
      js["turn"] = s.turn;
    }
    if (s.kind == traj::SegmentKind::Spiral) js["climb_rate"] = s.climb_rate;
    jt["segments"].push_back(js);
  }
  j["trajectory"] = jt;
  const auto& sp = c.sensor_params;
  j["sensors"] = {{"gyro_noise_std", sp.gyro_noise_std},
                  {"accel_noise_std", sp.accel_noise_std},
                  {"gyro_bias", detail::vec3_to_json(sp.gyro_bias)},
                  {"accel_bias", detail::vec3_to_json(sp.accel_bias)},
                  {"gnss_pos_std", sp.gnss_pos_std},
                  {"gnss_vel_std", sp.gnss_vel_std},
                  {"mag_noise_std", sp.mag_noise_std},
                  {"mag_bias", detail::vec3_to_json(sp.mag_bias)},
                  {"ref_field", detail::vec3_to_json(sp.ref_field)},
                  {"gravity", sp.gravity}};
  const auto& f = c.filter;
  j["filter"] = {{"q_att", f.q_att},
                 {"q_pos", f.q_pos},
                 {"q_vel", f.q_vel},
                 {"q_pos_vel", f.q_pos_vel},
                 {"q_gyro_bias", f.q_gyro_bias},
                 {"q_accel_bias", f.q_accel_bias},
                 {"q_geo", f.q_geo},
                 {"q_mag_bias", f.q_mag_bias},
                 {"r_pos", f.r_pos},
                 {"r_vel", f.r_vel},
                 {"r_mag", f.r_mag},
                 {"p0_att", f.p0_att},
                 {"p0_pos", f.p0_pos},
                 {"p0_vel", f.p0_vel},
                 {"p0_gyro_bias", f.p0_gyro_bias},
                 {"p0_accel_bias", f.p0_accel_bias},
                 {"p0_geo", f.p0_geo},
                 {"p0_mag_bias", f.p0_mag_bias}};
  const auto& a = c.attack;
  json ja;
  ja["kind"] = to_string(a.kind);
  ja["window"] = {{"start", a.window.start}, {"duration", a.window.duration}};
  switch (a.kind) {
    case AttackSelector::Bias:
      ja["low"] = a.bias_low;
      ja["high"] = a.bias_high;
      ja["in_degrees"] = a.bias_in_degrees;
      ja["ref_latitude_deg"] = a.ref_latitude_deg;
      break;
    case AttackSelector::Multiplicative:
      ja["factor"] = a.mult_factor;
      ja["origin_ne"] = json::array({a.mult_origin.x(), a.mult_origin.y()});
      break;
    case AttackSelector::Replacement:
      ja["pos_ne"] = json::array({a.repl_pos_ne.x(), a.repl_pos_ne.y()});
      ja["vel"] = detail::vec3_to_json(a.repl_vel);
      break;
    case AttackSelector::Ssd: {
      ja["theta"] = a.ssd.theta;
      ja["alpha"] = a.ssd.alpha;
      ja["phi"] = a.ssd.phi;
      ja["trigger_eps"] = a.ssd.trigger_eps;
      const char* mode = a.ssd_mode == attacks::SsdMode::Full            ? "full"
                         : a.ssd_mode == attacks::SsdMode::PositionOnly  ? "position_only"
                         : a.ssd_mode == attacks::SsdMode::VelocityOnly  ? "velocity_only"
                                                                         : "swapped";
      ja["mode"] = mode;
      const char* dir = a.ssd_direction == attacks::BiasDirection::NorthEast ? "north_east"
                        : a.ssd_direction == attacks::BiasDirection::NorthOnly ? "north_only"
                                                                               : "along_track";
      ja["direction"] = dir;
      ja["positive_accel_only"] = a.ssd_positive_accel_only;
      break;
    }
    case AttackSelector::VelocityBias:
      ja["low"] = a.vel_bias_low;
      ja["high"] = a.vel_bias_high;
      break;
    case AttackSelector::None:
      break;
  }
  j["attack"] = ja;
  j["detectors"] = {{"tau", c.detectors.tau},
                    {"nlc_drift", c.detectors.nlc.drift},
                    {"nlc_threshold", c.detectors.nlc.threshold},
                    {"ltw_window", c.detectors.ltw.window},
                    {"ltw_threshold", c.detectors.ltw.threshold}};
  j["seeds"] = {{"base", c.seed_base}, {"count", c.seed_count}};
  return j;
}

inline ScenarioConfig from_json(const json& j) {
  ScenarioConfig c;
  c.schema_version = j.at("schema_version").get<int>();
  c.name = j.value("name", std::string("scenario"));
  const json& jt = j.at("trajectory");
  c.trajectory.start_pos = detail::vec3_from_json(jt.value("start_pos", json::array({0, 0, 0})));
  c.trajectory.start_heading = jt.value("start_heading_deg", 0.0) * M_PI / 180.0;
  for (const auto& js : jt.at("segments")) {
    traj::MotionSegment s;
    const std::string kind = js.at("kind").get<std::string>();
    auto it = detail::segment_kinds().find(kind);
    if (it == detail::segment_kinds().end())
      throw std::invalid_argument("ScenarioConfig: unknown segment kind '" + kind + "'");
    s.kind = it->second;
    s.speed = js.at("speed").get<double>();
    s.duration = js.at("duration").get<double>();
    if (js.contains("heading_deg")) s.heading = js.at("heading_deg").get<double>() * M_PI / 180.0;
    s.radius = js.value("radius", 0.0);
    s.turn = js.value("turn", 1);
    s.climb_rate = js.value("climb_rate", 0.0);
    c.trajectory.segments.push_back(s);
  }
  if (j.contains("sensors")) {
    const json& s = j.at("sensors");
    auto& sp = c.sensor_params;
    sp.gyro_noise_std = s.value("gyro_noise_std", sp.gyro_noise_std);
    sp.accel_noise_std = s.value("accel_noise_std", sp.accel_noise_std);
    if (s.contains("gyro_bias")) sp.gyro_bias = detail::vec3_from_json(s.at("gyro_bias"));
    if (s.contains("accel_bias")) sp.accel_bias = detail::vec3_from_json(s.at("accel_bias"));
    sp.gnss_pos_std = s.value("gnss_pos_std", sp.gnss_pos_std);
    sp.gnss_vel_std = s.value("gnss_vel_std", sp.gnss_vel_std);
    sp.mag_noise_std = s.value("mag_noise_std", sp.mag_noise_std);
    if (s.contains("mag_bias")) sp.mag_bias = detail::vec3_from_json(s.at("mag_bias"));
    if (s.contains("ref_field")) sp.ref_field = detail::vec3_from_json(s.at("ref_field"));
    sp.gravity = s.value("gravity", sp.gravity);
  }
  if (j.contains("filter")) {
    const json& s = j.at("filter");
    auto& f = c.filter;
    f.q_att = s.value("q_att", f.q_att);
    f.q_pos = s.value("q_pos", f.q_pos);
    f.q_vel = s.value("q_vel", f.q_vel);
    f.q_pos_vel = s.value("q_pos_vel", f.q_pos_vel);
    f.q_gyro_bias = s.value("q_gyro_bias", f.q_gyro_bias);
    f.q_accel_bias = s.value("q_accel_bias", f.q_accel_bias);
    f.q_geo = s.value("q_geo", f.q_geo);
    f.q_mag_bias = s.value("q_mag_bias", f.q_mag_bias);
    f.r_pos = s.value("r_pos", f.r_pos);
    f.r_vel = s.value("r_vel", f.r_vel);
    f.r_mag = s.value("r_mag", f.r_mag);
    f.p0_att = s.value("p0_att", f.p0_att);
    f.p0_pos = s.value("p0_pos", f.p0_pos);
    f.p0_vel = s.value("p0_vel", f.p0_vel);
    f.p0_gyro_bias = s.value("p0_gyro_bias", f.p0_gyro_bias);
    f.p0_accel_bias = s.value("p0_accel_bias", f.p0_accel_bias);
    f.p0_geo = s.value("p0_geo", f.p0_geo);
    f.p0_mag_bias = s.value("p0_mag_bias", f.p0_mag_bias);
  }
  if (j.contains("attack")) {
    const json& ja = j.at("attack");
    auto& a = c.attack;
    const std::string kind = ja.value("kind", std::string("none"));
    auto it = detail::attack_kinds().find(kind);
    if (it == detail::attack_kinds().end())
      throw std::invalid_argument("ScenarioConfig: unknown attack kind '" + kind + "'");
    a.kind = it->second;
    if (ja.contains("window")) {
      a.window.start = ja.at("window").value("start", 0.0);
      a.window.duration = ja.at("window").value("duration", 0.0);
    }
    a.bias_low = ja.value("low", 0.0);
    a.bias_high = ja.value("high", 0.0);
    a.bias_in_degrees = ja.value("in_degrees", false);
    a.ref_latitude_deg = ja.value("ref_latitude_deg", 0.0);
    a.mult_factor = ja.value("factor", 1.5);
    if (ja.contains("origin_ne"))
      a.mult_origin = Eigen::Vector2d(ja.at("origin_ne").at(0).get<double>(),
                                      ja.at("origin_ne").at(1).get<double>());
    if (ja.contains("pos_ne"))
      a.repl_pos_ne = Eigen::Vector2d(ja.at("pos_ne").at(0).get<double>(),
                                      ja.at("pos_ne").at(1).get<double>());
    if (ja.contains("vel")) a.repl_vel = detail::vec3_from_json(ja.at("vel"));
    a.ssd.theta = ja.value("theta", a.ssd.theta);
    a.ssd.alpha = ja.value("alpha", a.ssd.alpha);
    a.ssd.phi = ja.value("phi", a.ssd.phi);
    a.ssd.trigger_eps = ja.value("trigger_eps", a.ssd.trigger_eps);
    a.ssd.window = a.window;
    const std::string mode = ja.value("mode", std::string("full"));
    a.ssd_mode = mode == "position_only" ? attacks::SsdMode::PositionOnly
                 : mode == "velocity_only" ? attacks::SsdMode::VelocityOnly
                 : mode == "swapped"       ? attacks::SsdMode::Swapped
                                           : attacks::SsdMode::Full;
    const std::string dir = ja.value("direction", std::string("north_east"));
    a.ssd_direction = dir == "north_only"   ? attacks::BiasDirection::NorthOnly
                      : dir == "along_track" ? attacks::BiasDirection::AlongTrack
                                             : attacks::BiasDirection::NorthEast;
    a.ssd_positive_accel_only = ja.value("positive_accel_only", false);
    a.vel_bias_low = ja.value("low", 0.0);
    a.vel_bias_high = ja.value("high", 0.0);
  }
  if (j.contains("detectors")) {
    const json& d = j.at("detectors");
    c.detectors.tau = d.value("tau", c.detectors.tau);
    c.detectors.nlc.drift = d.value("nlc_drift", c.detectors.nlc.drift);
    c.detectors.nlc.threshold = d.value("nlc_threshold", c.detectors.nlc.threshold);
    c.detectors.ltw.window = d.value("ltw_window", c.detectors.ltw.window);
    c.detectors.ltw.threshold = d.value("ltw_threshold", c.detectors.ltw.threshold);
  }
  if (j.contains("seeds")) {
    c.seed_base = j.at("seeds").value("base", std::uint64_t{1});
    c.seed_count = j.at("seeds").value("count", 30);
  }
  c.validate();
  return c;
}

}  // namespace insbench::bench
