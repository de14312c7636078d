#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>

#include "insbench/prng.hpp"
#include "insbench/sensors.hpp"

namespace insbench::attacks {

using Eigen::Vector2d;
using Eigen::Vector3d;
using sensors::GnssMeasurement;

/// Meters per degree of latitude; used to turn degree-denominated bias
/// payloads into local-frame meters at the reference latitude.
inline constexpr double kMetersPerDegree = 111320.0;

struct AttackWindow {
  double start = 0.0;
  double duration = 0.0;

  // Half-open [start, start + duration).
  bool contains(double t) const { return t >= start - 1e-9 && t < start + duration - 1e-9; }
  void validate() const {
    if (!(duration > 0.0)) throw std::invalid_argument("AttackWindow: duration must be > 0");
  }
};

struct AttackParams {
  double theta = 20.0;       // m, position-bias scale
  double alpha = 11.0;       // s, exponential time constant
  double phi = 0.08;         // s^2/m, velocity-factor rate
  double trigger_eps = 0.05; // m/s^2, linear/nonlinear decision tolerance
  AttackWindow window;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("AttackParams: alpha must be > 0");
    if (!(trigger_eps > 0.0)) throw std::invalid_argument("AttackParams: trigger_eps must be > 0");
    if (!std::isfinite(theta) || !std::isfinite(phi))
      throw std::invalid_argument("AttackParams: theta/phi must be finite");
  }
};

/// Motion state as the attacker sees it: velocities read off the victim's
/// GNSS feed one epoch apart.
struct ObservedVictimState {
  double t = 0.0;
  Vector3d vel = Vector3d::Zero();
  Vector3d prev_vel = Vector3d::Zero();
  double epoch_dt = 1.0;
};

struct BiasSpec {
  double low = 0.0;   // m
  double high = 0.0;  // m
};
struct MultiplicativeSpec {
  double factor = 1.0;
  Vector2d origin_ne = Vector2d::Zero();
};
struct ReplacementSpec {
  GnssMeasurement fake;
};
using AttackKind = std::variant<BiasSpec, MultiplicativeSpec, ReplacementSpec, AttackParams>;

/// Uniform position bias, fresh independent draws per epoch on N and E.
/// Deterministic in (seed, epoch).
inline GnssMeasurement bias_attack(const GnssMeasurement& z, double low, double high,
                                   std::uint64_t seed, int epoch) {
  if (low > high) throw std::invalid_argument("bias_attack: low > high");
  GnssMeasurement out = z;
  if (high == low) {
    out.pos_ne.array() += low;
    return out;
  }
  auto eng = substream_at(seed, Stream::Attack, static_cast<std::uint64_t>(epoch));
  std::uniform_real_distribution<double> u(low, high);
  out.pos_ne.x() += u(eng);
  out.pos_ne.y() += u(eng);
  return out;
}

/// Degree-denominated bounds converted at the reference latitude. North is
/// latitude-independent; East shrinks with cos(lat).
inline GnssMeasurement bias_attack_degrees(const GnssMeasurement& z, double low_deg,
                                           double high_deg, double ref_lat_deg,
                                           std::uint64_t seed, int epoch) {
  if (low_deg > high_deg) throw std::invalid_argument("bias_attack_degrees: low > high");
  auto eng = substream_at(seed, Stream::Attack, static_cast<std::uint64_t>(epoch));
  std::uniform_real_distribution<double> u(low_deg, high_deg);
  const double draw_n = (high_deg == low_deg) ? low_deg : u(eng);
  const double draw_e = (high_deg == low_deg) ? low_deg : u(eng);
  GnssMeasurement out = z;
  out.pos_ne.x() += draw_n * kMetersPerDegree;
  out.pos_ne.y() += draw_e * kMetersPerDegree * std::cos(ref_lat_deg * M_PI / 180.0);
  return out;
}

/// Scale position about the mission origin (the local-frame datum); scaling
/// raw geodetic coordinates is meaningless in a local NED bench.
inline GnssMeasurement multiplicative_attack(const GnssMeasurement& z, double factor,
                                             const Vector2d& origin_ne = Vector2d::Zero()) {
  if (!std::isfinite(factor)) throw std::invalid_argument("multiplicative_attack: bad factor");
  GnssMeasurement out = z;
  out.pos_ne = origin_ne + factor * (z.pos_ne - origin_ne);
  return out;
}

inline GnssMeasurement replacement_attack(const GnssMeasurement& z, const GnssMeasurement& fake) {
  GnssMeasurement out = fake;
  out.t = z.t;
  return out;
}

/// F(t; theta, alpha) = theta * e^(t/alpha) — position bias in the linear
/// motion state, t counted from branch activation.
inline double ssd_position_bias(double t_i, double theta, double alpha) {
  return theta * std::exp(t_i / alpha);
}

/// G(t, a; phi) = log2(2 + phi * a * t), argument clamped to 2^-20 so a
/// deceleration cannot push the log off its domain.
inline double ssd_velocity_factor(double t_i, double a_dim, double phi) {
  const double floor_arg = std::pow(2.0, -20);
  const double arg = std::max(2.0 + phi * a_dim * t_i, floor_arg);
  return std::log2(arg);
}

inline Vector3d ssd_accel_estimate(const ObservedVictimState& obs) {
  if (!(obs.epoch_dt > 0.0)) throw std::invalid_argument("ssd_accel_estimate: epoch_dt <= 0");
  return (obs.vel - obs.prev_vel) / obs.epoch_dt;
}

enum class SsdBranch { Linear, Nonlinear };
enum class SsdMode { Full, PositionOnly, VelocityOnly, Swapped };
enum class BiasDirection { NorthEast, NorthOnly, AlongTrack };

inline SsdBranch ssd_branch(const ObservedVictimState& obs, const AttackParams& p) {
  return ssd_accel_estimate(obs).norm() <= p.trigger_eps ? SsdBranch::Linear
                                                         : SsdBranch::Nonlinear;
}

namespace detail {

inline void apply_position_branch(GnssMeasurement& z, double t_attack, const AttackParams& p,
                                  BiasDirection dir) {
  const double f = ssd_position_bias(t_attack, p.theta, p.alpha);
  switch (dir) {
    case BiasDirection::NorthEast:
      z.pos_ne.array() += f;
      break;
    case BiasDirection::NorthOnly:
      z.pos_ne.x() += f;
      break;
    case BiasDirection::AlongTrack: {
      const double vh = std::hypot(z.vel_ned.x(), z.vel_ned.y());
      if (vh > 1e-9)
        z.pos_ne += f * Vector2d(z.vel_ned.x(), z.vel_ned.y()) / vh;
      else
        z.pos_ne.x() += f;
      break;
    }
  }
}

inline void apply_velocity_branch(GnssMeasurement& z, const Vector3d& a, double t_attack,
                                  const AttackParams& p, bool positive_accel_only) {
  for (int d = 0; d < 2; ++d) {  // N and E only
    if (positive_accel_only && !(a(d) > 0.0)) continue;
    z.vel_ned(d) *= ssd_velocity_factor(t_attack, a(d), p.phi);
  }
}

}  // namespace detail

/// One SSD epoch: the acceleration estimate picks exactly one branch;
/// position bias in the linear state, per-axis velocity factors otherwise.
inline GnssMeasurement ssd_apply(const GnssMeasurement& z, const ObservedVictimState& obs,
                                 double t_attack, const AttackParams& params,
                                 BiasDirection dir = BiasDirection::NorthEast,
                                 bool positive_accel_only = false) {
  params.validate();
  GnssMeasurement out = z;
  const Vector3d a = ssd_accel_estimate(obs);
  if (a.norm() <= params.trigger_eps) {
    detail::apply_position_branch(out, t_attack, params, dir);
  } else {
    detail::apply_velocity_branch(out, a, t_attack, params, positive_accel_only);
  }
  return out;
}

/// Stateful SSD driver: tracks the victim's clean feed for the acceleration
/// estimate and restarts the attack clock whenever the active branch
/// changes. One instance per simulation run.
class SsdAttack {
 public:
  SsdAttack(const AttackParams& params, SsdMode mode = SsdMode::Full,
            BiasDirection dir = BiasDirection::NorthEast, bool positive_accel_only = false)
      : params_(params), mode_(mode), dir_(dir), positive_only_(positive_accel_only) {
    params_.validate();
    params_.window.validate();
  }

  GnssMeasurement apply(const GnssMeasurement& clean, int epoch) {
    ObservedVictimState obs;
    obs.t = clean.t;
    obs.vel = clean.vel_ned;
    obs.prev_vel = have_prev_ ? prev_vel_ : clean.vel_ned;
    obs.epoch_dt = 1.0;
    prev_vel_ = clean.vel_ned;
    have_prev_ = true;
    (void)epoch;

    if (!params_.window.contains(clean.t)) {
      branch_.reset();
      return clean;
    }
    const SsdBranch b = ssd_branch(obs, params_);
    if (!branch_ || *branch_ != b) {
      branch_ = b;
      t_activation_ = clean.t;
    }
    const double t_attack = clean.t - t_activation_;
    GnssMeasurement out = clean;
    const Vector3d a = ssd_accel_estimate(obs);
    const bool pos_branch = (b == SsdBranch::Linear) != (mode_ == SsdMode::Swapped);
    if (pos_branch) {
      if (mode_ != SsdMode::VelocityOnly)
        detail::apply_position_branch(out, t_attack, params_, dir_);
    } else {
      if (mode_ != SsdMode::PositionOnly)
        detail::apply_velocity_branch(out, a, t_attack, params_, positive_only_);
    }
    return out;
  }

  const AttackParams& params() const { return params_; }

 private:
  AttackParams params_;
  SsdMode mode_;
  BiasDirection dir_;
  bool positive_only_;
  Vector3d prev_vel_ = Vector3d::Zero();
  bool have_prev_ = false;
  std::optional<SsdBranch> branch_;
  double t_activation_ = 0.0;
};

}  // namespace insbench::attacks
