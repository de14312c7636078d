#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace insbench::traj {

using Eigen::Quaterniond;
using Eigen::Vector3d;

inline constexpr double kImuRateHz = 160.0;
inline constexpr double kImuDt = 1.0 / kImuRateHz;

// A sample is Linear when its analytic acceleration vanishes; ground truth
// is analytic so an epsilon test suffices.
inline constexpr double kLinearAccelTol = 1e-6;

enum class SegmentKind { StraightLine, CircularArc, Spiral, Hover };
enum class MotionClass { Linear, Nonlinear };

inline const char* to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::StraightLine: return "straight";
    case SegmentKind::CircularArc: return "arc";
    case SegmentKind::Spiral: return "spiral";
    case SegmentKind::Hover: return "hover";
  }
  return "?";
}

/// One ground-truth kinematic sample in the local NED frame.
struct TrajectorySample {
  double t = 0.0;
  Vector3d pos = Vector3d::Zero();    // m
  Vector3d vel = Vector3d::Zero();    // m/s
  Vector3d accel = Vector3d::Zero();  // m/s^2
  Quaterniond attitude = Quaterniond::Identity();  // body-to-NED
};

/// Piecewise-analytic motion primitive. `heading` is used by StraightLine
/// and Hover; when unset the builder carries the heading over from the
/// start state. `turn` selects arc direction: +1 turns from north toward
/// east, -1 the other way. `climb_rate` is positive upward (Spiral only).
struct MotionSegment {
  SegmentKind kind = SegmentKind::StraightLine;
  double speed = 0.0;     // m/s, horizontal component
  double duration = 0.0;  // s (snapped to the 1/160 s grid by the builders)
  std::optional<double> heading;  // rad, from north toward east
  double radius = 0.0;    // m, CircularArc / Spiral
  int turn = +1;
  double climb_rate = 0.0;  // m/s upward, Spiral
};

struct Waypoint {
  std::size_t index = 0;  // into Trajectory::samples
  Vector3d pos = Vector3d::Zero();
};

/// Resolved placement of one segment inside a composed trajectory; kept so
/// acceleration_at() can evaluate the analytic kinematics at any time.
struct SegmentSpan {
  MotionSegment seg;      // duration snapped
  double t_begin = 0.0;
  double t_end = 0.0;     // == t_begin + seg.duration
  std::size_t i_begin = 0;
  double psi0 = 0.0;      // heading at segment entry
  Vector3d pos0 = Vector3d::Zero();
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<Waypoint> waypoints;
  std::vector<SegmentSpan> segments;
  std::vector<MotionClass> motion;  // one entry per sample

  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
  std::size_t size() const { return samples.size(); }
};

inline Quaterniond yaw_attitude(double psi) {
  return Quaterniond(Eigen::AngleAxisd(psi, Vector3d::UnitZ()));
}

inline double yaw_of(const Quaterniond& q) {
  const auto& w = q.w();
  const auto& x = q.x();
  const auto& y = q.y();
  const auto& z = q.z();
  return std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
}

inline double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

namespace detail {

inline void validate_segment(const MotionSegment& s) {
  if (!(s.duration > 0.0) || !std::isfinite(s.duration))
    throw std::invalid_argument("MotionSegment: duration must be > 0");
  if (s.speed < 0.0 || !std::isfinite(s.speed))
    throw std::invalid_argument("MotionSegment: speed must be >= 0");
  if ((s.kind == SegmentKind::CircularArc || s.kind == SegmentKind::Spiral) &&
      !(s.radius > 0.0))
    throw std::invalid_argument("MotionSegment: arc radius must be > 0");
  if (s.turn != 1 && s.turn != -1)
    throw std::invalid_argument("MotionSegment: turn must be +1 or -1");
  if (!std::isfinite(s.climb_rate))
    throw std::invalid_argument("MotionSegment: climb rate must be finite");
}

inline std::size_t snapped_steps(double duration) {
  const auto n = static_cast<std::size_t>(std::llround(duration * kImuRateHz));
  return n == 0 ? 1 : n;
}

inline double entry_heading(const MotionSegment& s, const TrajectorySample& start) {
  if ((s.kind == SegmentKind::StraightLine || s.kind == SegmentKind::Hover) && s.heading)
    return *s.heading;
  const double vh = std::hypot(start.vel.x(), start.vel.y());
  if (vh > 1e-9) return std::atan2(start.vel.y(), start.vel.x());
  return yaw_of(start.attitude);
}

// Evaluate the analytic kinematics of `span` at local time tau in
// [0, duration]. Exact closed forms per segment kind.
inline TrajectorySample eval(const SegmentSpan& span, double tau) {
  const MotionSegment& s = span.seg;
  TrajectorySample out;
  out.t = span.t_begin + tau;
  switch (s.kind) {
    case SegmentKind::Hover: {
      out.pos = span.pos0;
      out.attitude = yaw_attitude(span.psi0);
      break;
    }
    case SegmentKind::StraightLine: {
      const Vector3d dir(std::cos(span.psi0), std::sin(span.psi0), 0.0);
      out.pos = span.pos0 + s.speed * tau * dir;
      out.vel = s.speed * dir;
      out.attitude = yaw_attitude(span.psi0);
      break;
    }
    case SegmentKind::CircularArc:
    case SegmentKind::Spiral: {
      const double omega = s.turn * s.speed / s.radius;
      const double psi = span.psi0 + omega * tau;
      // Center sits at radius to the side of the entry heading.
      const Vector3d left(-std::sin(span.psi0) * s.turn, std::cos(span.psi0) * s.turn, 0.0);
      const Vector3d center = span.pos0 + s.radius * left;
      const Vector3d radial(std::sin(psi) * s.turn, -std::cos(psi) * s.turn, 0.0);
      out.pos = center + s.radius * radial;
      out.vel = Vector3d(s.speed * std::cos(psi), s.speed * std::sin(psi), 0.0);
      out.accel = Vector3d(-s.speed * omega * std::sin(psi), s.speed * omega * std::cos(psi), 0.0);
      if (s.kind == SegmentKind::Spiral) {
        out.pos.z() = span.pos0.z() - s.climb_rate * tau;  // up is -D
        out.vel.z() = -s.climb_rate;
      } else {
        out.pos.z() = span.pos0.z();
      }
      out.attitude = yaw_attitude(psi);
      break;
    }
  }
  return out;
}

inline MotionClass classify(const TrajectorySample& s) {
  return s.accel.norm() <= kLinearAccelTol ? MotionClass::Linear : MotionClass::Nonlinear;
}

// Append `span` samples to `out`, overwriting the shared boundary sample so
// it carries the new segment's acceleration (closed-left convention).
inline void append_span(Trajectory& out, SegmentSpan span) {
  const std::size_t steps = snapped_steps(span.seg.duration);
  span.seg.duration = static_cast<double>(steps) * kImuDt;
  span.t_end = span.t_begin + span.seg.duration;
  const std::size_t j0 = out.samples.empty() ? 0 : 1;
  if (!out.samples.empty()) {
    TrajectorySample boundary = eval(span, 0.0);
    boundary.t = out.samples.back().t;
    out.samples.back() = boundary;
    out.motion.back() = classify(boundary);
  }
  for (std::size_t j = j0; j <= steps; ++j) {
    TrajectorySample smp = eval(span, static_cast<double>(j) * kImuDt);
    smp.t = static_cast<double>(span.i_begin + j) * kImuDt;
    out.samples.push_back(smp);
    out.motion.push_back(classify(smp));
  }
  out.segments.push_back(span);
}

}  // namespace detail

/// Generate one segment starting from `start` (position, velocity direction
/// and attitude carry over). Samples cover [0, duration] at 1/160 s.
inline Trajectory build_segment(const MotionSegment& spec, const TrajectorySample& start) {
  detail::validate_segment(spec);
  Trajectory out;
  SegmentSpan span;
  span.seg = spec;
  span.t_begin = 0.0;
  span.i_begin = 0;
  span.psi0 = detail::entry_heading(spec, start);
  span.pos0 = start.pos;
  detail::append_span(out, span);
  out.waypoints.push_back({0, out.samples.front().pos});
  out.waypoints.push_back({out.samples.size() - 1, out.samples.back().pos});
  return out;
}

/// Concatenate segments into one mission. Position is continuous by
/// construction; an explicit heading that contradicts the carried-over
/// velocity direction is rejected. Waypoints mark every segment boundary.
inline Trajectory compose(const std::vector<MotionSegment>& segments,
                          const TrajectorySample& start = TrajectorySample{}) {
  if (segments.empty()) throw std::invalid_argument("compose: empty segment list");
  Trajectory out;
  TrajectorySample cursor = start;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const MotionSegment& spec = segments[k];
    detail::validate_segment(spec);
    const double carried = detail::entry_heading(MotionSegment{spec.kind, spec.speed, spec.duration,
                                                               std::nullopt, spec.radius, spec.turn,
                                                               spec.climb_rate},
                                                 cursor);
    const double psi0 = detail::entry_heading(spec, cursor);
    const double vh = std::hypot(cursor.vel.x(), cursor.vel.y());
    if (k > 0 && spec.heading && vh > 1e-9 && std::abs(wrap_angle(psi0 - carried)) > 1e-6)
      throw std::invalid_argument("compose: segment " + std::to_string(k) +
                                  " heading breaks velocity-direction continuity");
    SegmentSpan span;
    span.seg = spec;
    span.t_begin = out.samples.empty() ? 0.0 : out.samples.back().t;
    span.i_begin = out.samples.empty() ? 0 : out.samples.size() - 1;
    span.psi0 = psi0;
    span.pos0 = cursor.pos;
    detail::append_span(out, span);
    cursor = out.samples.back();
    out.waypoints.push_back({span.i_begin, out.samples[span.i_begin].pos});
  }
  out.waypoints.push_back({out.samples.size() - 1, out.samples.back().pos});
  return out;
}

/// Analytic acceleration of the segment active at time t (closed-left: a
/// segment boundary belongs to the segment that begins there).
inline Vector3d acceleration_at(const Trajectory& traj, double t) {
  if (traj.segments.empty() || t < 0.0 || t > traj.duration() + 1e-12)
    throw std::out_of_range("acceleration_at: t outside trajectory span");
  const SegmentSpan* active = &traj.segments.back();
  for (const auto& span : traj.segments) {
    if (t >= span.t_begin - 1e-12 && t < span.t_end - 1e-12) {
      active = &span;
      break;
    }
  }
  return detail::eval(*active, t - active->t_begin).accel;
}

}  // namespace insbench::traj
