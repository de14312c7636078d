#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "insbench/prng.hpp"
#include "insbench/trajectory.hpp"

namespace insbench::sensors {

using Eigen::Vector2d;
using Eigen::Vector3d;

inline constexpr double kGravity = 9.80665;  // m/s^2
inline constexpr int kGnssDecimation = 160;  // IMU samples per GNSS epoch

struct ImuSample {
  double t = 0.0;
  Vector3d gyro = Vector3d::Zero();   // rad/s, body frame
  Vector3d accel = Vector3d::Zero();  // m/s^2, body-frame specific force
};

struct GnssMeasurement {
  double t = 0.0;
  Vector2d pos_ne = Vector2d::Zero();  // m
  Vector3d vel_ned = Vector3d::Zero(); // m/s
};

struct MagMeasurement {
  double t = 0.0;
  Vector3d field_body = Vector3d::Zero();  // normalized field units
};

struct SensorParams {
  double gyro_noise_std = 0.005;   // rad/s
  double accel_noise_std = 0.05;   // m/s^2
  Vector3d gyro_bias = Vector3d::Zero();
  Vector3d accel_bias = Vector3d::Zero();
  double gnss_pos_std = 0.5;       // m
  double gnss_vel_std = 0.1;       // m/s
  double mag_noise_std = 0.01;
  Vector3d mag_bias = Vector3d::Zero();
  Vector3d ref_field = Vector3d(0.33, 0.0, 0.44);  // NED, unit-free
  double gravity = kGravity;

  void validate() const {
    if (gyro_noise_std < 0 || accel_noise_std < 0 || gnss_pos_std < 0 ||
        gnss_vel_std < 0 || mag_noise_std < 0)
      throw std::invalid_argument("SensorParams: noise std must be >= 0");
    if (!(gravity > 0)) throw std::invalid_argument("SensorParams: gravity must be > 0");
  }
};

struct SensorStreams {
  std::vector<ImuSample> imu;
  std::vector<GnssMeasurement> gnss;
  std::vector<MagMeasurement> mag;
  std::uint64_t seed = 0;
};

namespace detail {

// Analytic heading rate from the stored kinematics; for constant-speed
// segments psi_dot = (vN*aE - vE*aN)/|v_h|^2, zero when hovering.
inline double yaw_rate(const traj::TrajectorySample& s) {
  const double vh2 = s.vel.x() * s.vel.x() + s.vel.y() * s.vel.y();
  if (vh2 < 1e-12) return 0.0;
  return (s.vel.x() * s.accel.y() - s.vel.y() * s.accel.x()) / vh2;
}

inline Vector3d gauss3(std::mt19937_64& eng, std::normal_distribution<double>& n) {
  return Vector3d(n(eng), n(eng), n(eng));
}

}  // namespace detail

/// 160 Hz body-frame gyro/specific-force stream (one sample per trajectory
/// sample). Specific force is R(q)^T (a_ned - g_ned) with g_ned = (0,0,+g).
inline std::vector<ImuSample> synth_imu(const traj::Trajectory& traj,
                                        const SensorParams& p, std::uint64_t seed) {
  p.validate();
  auto geng = substream(seed, Stream::ImuGyro);
  auto aeng = substream(seed, Stream::ImuAccel);
  std::normal_distribution<double> n01(0.0, 1.0);
  const Vector3d g_ned(0.0, 0.0, p.gravity);
  std::vector<ImuSample> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    ImuSample m;
    m.t = s.t;
    const Vector3d omega_body(0.0, 0.0, detail::yaw_rate(s));
    const Eigen::Matrix3d Rt = s.attitude.toRotationMatrix().transpose();
    m.gyro = omega_body + p.gyro_bias + p.gyro_noise_std * detail::gauss3(geng, n01);
    m.accel = Rt * (s.accel - g_ned) + p.accel_bias + p.accel_noise_std * detail::gauss3(aeng, n01);
    out.push_back(m);
  }
  return out;
}

/// 1 Hz NE position / NED velocity fixes at every 160th trajectory sample,
/// epoch at t = 0 included.
inline std::vector<GnssMeasurement> synth_gnss(const traj::Trajectory& traj,
                                               const SensorParams& p, std::uint64_t seed) {
  p.validate();
  auto peng = substream(seed, Stream::GnssPos);
  auto veng = substream(seed, Stream::GnssVel);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<GnssMeasurement> out;
  for (std::size_t i = 0; i < traj.samples.size(); i += kGnssDecimation) {
    const auto& s = traj.samples[i];
    GnssMeasurement m;
    m.t = s.t;
    m.pos_ne = s.pos.head<2>() + p.gnss_pos_std * Vector2d(n01(peng), n01(peng));
    m.vel_ned = s.vel + p.gnss_vel_std * detail::gauss3(veng, n01);
    out.push_back(m);
  }
  return out;
}

/// 1 Hz body-frame magnetometer stream: R(q)^T * ref_field + bias + noise.
inline std::vector<MagMeasurement> synth_mag(const traj::Trajectory& traj,
                                             const SensorParams& p, std::uint64_t seed) {
  p.validate();
  auto eng = substream(seed, Stream::Mag);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<MagMeasurement> out;
  for (std::size_t i = 0; i < traj.samples.size(); i += kGnssDecimation) {
    const auto& s = traj.samples[i];
    MagMeasurement m;
    m.t = s.t;
    m.field_body = s.attitude.toRotationMatrix().transpose() * p.ref_field + p.mag_bias +
                   p.mag_noise_std * detail::gauss3(eng, n01);
    out.push_back(m);
  }
  return out;
}

inline SensorStreams synth_all(const traj::Trajectory& traj, const SensorParams& p,
                               std::uint64_t seed) {
  SensorStreams s;
  s.imu = synth_imu(traj, p, seed);
  s.gnss = synth_gnss(traj, p, seed);
  s.mag = synth_mag(traj, p, seed);
  s.seed = seed;
  return s;
}

}  // namespace insbench::sensors
