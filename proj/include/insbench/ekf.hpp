#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "insbench/sensors.hpp"
#include "insbench/trajectory.hpp"

namespace insbench::ekf {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Quaterniond;
using Eigen::Vector3d;
using Eigen::VectorXd;

inline constexpr int kDim = 22;
using Mat22 = Eigen::Matrix<double, kDim, kDim>;
using Vec22 = Eigen::Matrix<double, kDim, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using H5x22 = Eigen::Matrix<double, 5, kDim>;
using H3x22 = Eigen::Matrix<double, 3, kDim>;

// State layout (0-based offsets into the 22-vector).
inline constexpr int kQ = 0;    // quaternion w,x,y,z
inline constexpr int kP = 4;    // NED position
inline constexpr int kV = 7;    // NED velocity
inline constexpr int kBg = 10;  // integrated-angle gyro bias [rad]
inline constexpr int kBa = 13;  // integrated-velocity accel bias [m/s]
inline constexpr int kMf = 16;  // geomagnetic field, NED
inline constexpr int kMb = 19;  // magnetometer bias, body

/// Full filter state. Quaternion is kept unit-norm by the filter; the raw
/// 22-vector form is used for covariance math and numeric Jacobians.
struct State {
  Quaterniond q = Quaterniond::Identity();
  Vector3d pos = Vector3d::Zero();
  Vector3d vel = Vector3d::Zero();
  Vector3d gyro_bias = Vector3d::Zero();
  Vector3d accel_bias = Vector3d::Zero();
  Vector3d geo_field = Vector3d::Zero();
  Vector3d mag_bias = Vector3d::Zero();

  Vec22 to_vector() const {
    Vec22 v;
    v << q.w(), q.x(), q.y(), q.z(), pos, vel, gyro_bias, accel_bias, geo_field, mag_bias;
    return v;
  }
  static State from_vector(const Vec22& v) {
    State s;
    s.q = Quaterniond(v(0), v(1), v(2), v(3));  // not normalized on purpose
    s.pos = v.segment<3>(kP);
    s.vel = v.segment<3>(kV);
    s.gyro_bias = v.segment<3>(kBg);
    s.accel_bias = v.segment<3>(kBa);
    s.geo_field = v.segment<3>(kMf);
    s.mag_bias = v.segment<3>(kMb);
    return s;
  }
};

struct NoiseConfig {
  Mat22 Q = Mat22::Zero();           // process noise rate (added as Q*dt)
  Mat5 R_gnss = Mat5::Identity();
  Matrix3d R_mag = Matrix3d::Identity();
};

enum class MeasSource { Gnss, Mag };

struct Innovation {
  double t = 0.0;
  MeasSource source = MeasSource::Gnss;
  VectorXd r;   // z - h(x-)
  MatrixXd S;   // H P- H^T + R
  bool rejected = false;
};

using Gain22x5 = Eigen::Matrix<double, kDim, 5>;

struct FilterTrace {
  std::vector<State> states;             // one per IMU sample
  std::vector<Innovation> innovations;   // GNSS + magnetometer epochs
  std::vector<Gain22x5> gnss_gains;      // optional, kept when record_gains
};

namespace detail {

// Quaternion from a rotation vector, smooth through zero (no normalization,
// so it stays differentiable for the numeric Jacobian columns).
inline Quaterniond quat_from_rotvec(const Vector3d& v) {
  const double a = v.norm();
  double w, k;
  if (a < 1e-8) {
    w = 1.0 - a * a / 8.0;
    k = 0.5 - a * a / 48.0;
  } else {
    w = std::cos(0.5 * a);
    k = std::sin(0.5 * a) / a;
  }
  return Quaterniond(w, k * v.x(), k * v.y(), k * v.z());
}

}  // namespace detail

/// Strapdown mechanization over one IMU interval. Euler position update by
/// the pre-update velocity; bias and field states are constant. No
/// quaternion renormalization here: predict() renormalizes afterwards, and
/// the state-transition Jacobian differentiates exactly this map.
inline State mechanize(const State& x, const sensors::ImuSample& imu, double dt,
                       double gravity) {
  State out = x;
  const Vector3d dtheta = imu.gyro * dt - x.gyro_bias;
  const Vector3d dvel = imu.accel * dt - x.accel_bias;
  out.pos = x.pos + x.vel * dt;
  const Matrix3d R = x.q.toRotationMatrix();
  out.vel = x.vel + R * dvel + Vector3d(0.0, 0.0, gravity) * dt;
  out.q = x.q * detail::quat_from_rotvec(dtheta);
  return out;
}

/// State-transition Jacobian of mechanize(). Kinematic blocks are analytic;
/// the quaternion-coupled columns (q, gyro bias) come from central
/// differences with step 1e-6, which keeps them exact to ~1e-12.
inline Mat22 transition_jacobian(const State& x, const sensors::ImuSample& imu, double dt,
                                 double gravity) {
  Mat22 F = Mat22::Identity();
  const Matrix3d R = x.q.toRotationMatrix();
  F.block<3, 3>(kP, kV) = dt * Matrix3d::Identity();
  F.block<3, 3>(kV, kBa) = -R;
  const double h = 1e-6;
  const Vec22 x0 = x.to_vector();
  const int cols[7] = {0, 1, 2, 3, kBg, kBg + 1, kBg + 2};
  for (int c : cols) {
    Vec22 xp = x0, xm = x0;
    xp(c) += h;
    xm(c) -= h;
    const Vec22 fp = mechanize(State::from_vector(xp), imu, dt, gravity).to_vector();
    const Vec22 fm = mechanize(State::from_vector(xm), imu, dt, gravity).to_vector();
    F.col(c) = (fp - fm) / (2.0 * h);
  }
  return F;
}

/// One prediction step: mechanize, renormalize the quaternion, propagate
/// covariance as F P F^T + Q dt with symmetrization.
inline void predict(State& x, Mat22& P, const sensors::ImuSample& imu, double dt,
                    const NoiseConfig& cfg, double gravity) {
  if (!(dt > 0.0)) throw std::invalid_argument("predict: dt must be > 0");
  if (!imu.gyro.allFinite() || !imu.accel.allFinite())
    throw std::runtime_error("predict: non-finite IMU sample");
  const Mat22 F = transition_jacobian(x, imu, dt, gravity);
  x = mechanize(x, imu, dt, gravity);
  const double qn = x.q.norm();
  if (std::abs(qn - 1.0) > 1e-3)
    throw std::runtime_error("predict: quaternion norm drifted beyond 1e-3");
  x.q.coeffs() /= qn;
  P = F * P * F.transpose() + cfg.Q * dt;
  P = 0.5 * (P + P.transpose()).eval();
}

/// GNSS observation matrix: selects P_N, P_E and the three velocity states.
/// The raw down-position row is all zero and is dropped, making the GNSS
/// measurement 5-dimensional.
inline H5x22 gnss_observation() {
  H5x22 H = H5x22::Zero();
  H(0, kP + 0) = 1.0;
  H(1, kP + 1) = 1.0;
  H(2, kV + 0) = 1.0;
  H(3, kV + 1) = 1.0;
  H(4, kV + 2) = 1.0;
  return H;
}

inline Vec5 gnss_predicted(const State& x) {
  Vec5 z;
  z << x.pos.x(), x.pos.y(), x.vel;
  return z;
}

inline Vector3d mag_predicted(const State& x) {
  return x.q.toRotationMatrix().transpose() * x.geo_field + x.mag_bias;
}

inline H3x22 mag_observation(const State& x) {
  H3x22 H = H3x22::Zero();
  H.block<3, 3>(0, kMf) = x.q.toRotationMatrix().transpose();
  H.block<3, 3>(0, kMb) = Matrix3d::Identity();
  const double h = 1e-6;
  const Vec22 x0 = x.to_vector();
  for (int c = 0; c < 4; ++c) {
    Vec22 xp = x0, xm = x0;
    xp(c) += h;
    xm(c) -= h;
    H.col(c) = (mag_predicted(State::from_vector(xp)) - mag_predicted(State::from_vector(xm))) /
               (2.0 * h);
  }
  return H;
}

struct UpdateResult {
  Innovation innovation;
  bool applied = false;
};

/// Generic measurement update. Joseph-form covariance keeps P symmetric
/// PSD; the quaternion is renormalized after the additive correction. A
/// near-singular S rejects the update: the innovation is still reported and
/// the prior passes through unchanged.
template <int M>
UpdateResult kalman_update(State& x, Mat22& P, const Eigen::Matrix<double, M, 1>& z,
                           const Eigen::Matrix<double, M, 1>& z_pred,
                           const Eigen::Matrix<double, M, kDim>& H,
                           const Eigen::Matrix<double, M, M>& R, double t, MeasSource src) {
  using MatM = Eigen::Matrix<double, M, M>;
  const MatM S = (H * P * H.transpose() + R).eval();
  UpdateResult out;
  out.innovation.t = t;
  out.innovation.source = src;
  out.innovation.r = z - z_pred;
  out.innovation.S = S;

  Eigen::SelfAdjointEigenSolver<MatM> es(S);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > 1e12) {
    out.innovation.rejected = true;
    return out;
  }

  const Eigen::Matrix<double, kDim, M> K = P * H.transpose() * S.inverse();
  const Vec22 xv = x.to_vector() + K * out.innovation.r;
  x = State::from_vector(xv);
  x.q.normalize();
  const Mat22 IKH = Mat22::Identity() - K * H;
  P = IKH * P * IKH.transpose() + K * R * K.transpose();
  P = 0.5 * (P + P.transpose()).eval();
  out.applied = true;
  return out;
}

/// Simplified identity-observation gain K = I - R (P_prev + Q + R)^-1.
/// Property-test oracle against the full gain restricted to the observed
/// subspace; not used on the filter path.
inline MatrixXd gain_simplified_check(const MatrixXd& P_prev, const MatrixXd& Q,
                                      const MatrixXd& R) {
  const auto n = P_prev.rows();
  if (P_prev.cols() != n || Q.rows() != n || Q.cols() != n || R.rows() != n || R.cols() != n)
    throw std::invalid_argument("gain_simplified_check: inconsistent dimensions");
  const MatrixXd Spr = P_prev + Q + R;
  Eigen::FullPivLU<MatrixXd> lu(Spr);
  if (!lu.isInvertible())
    throw std::invalid_argument("gain_simplified_check: singular P_prev + Q + R");
  return MatrixXd::Identity(n, n) - R * lu.inverse();
}

struct InitConfig {
  Vec22 p0_diag = Vec22::Ones();
  Vector3d geo_field = Vector3d(0.33, 0.0, 0.44);
  Vec22 perturbation = Vec22::Zero();  // added to the truth-derived state
};

inline std::pair<State, Mat22> init_filter(const traj::TrajectorySample& truth0,
                                           const InitConfig& cfg) {
  if ((cfg.p0_diag.array() < 0.0).any())
    throw std::invalid_argument("init_filter: P0 diagonal must be non-negative");
  State x;
  x.q = truth0.attitude.normalized();
  x.pos = truth0.pos;
  x.vel = truth0.vel;
  x.geo_field = cfg.geo_field;
  Vec22 v = x.to_vector() + cfg.perturbation;
  x = State::from_vector(v);
  x.q.normalize();
  return {x, cfg.p0_diag.asDiagonal()};
}

/// Hook applied to each GNSS measurement before fusion (the attack surface).
using AttackHook = std::function<sensors::GnssMeasurement(const sensors::GnssMeasurement&, int)>;

struct RunConfig {
  NoiseConfig noise;
  State init_state;
  Mat22 P0 = Mat22::Identity();
  double gravity = sensors::kGravity;
  bool record_gains = false;
};

/// Full filter pass over one sensor record: predict on every IMU sample, at
/// each 1 Hz epoch run the attack hook, then the GNSS update, then the
/// magnetometer update. Epoch 0 fuses before any prediction.
inline FilterTrace run_filter(const sensors::SensorStreams& streams, const AttackHook& attack,
                              const RunConfig& cfg) {
  const std::size_t n = streams.imu.size();
  if (n == 0 || (n - 1) % sensors::kGnssDecimation != 0)
    throw std::invalid_argument("run_filter: IMU stream not aligned to 1 Hz epochs");
  const std::size_t epochs = (n - 1) / sensors::kGnssDecimation + 1;
  if (streams.gnss.size() != epochs || streams.mag.size() != epochs)
    throw std::invalid_argument("run_filter: GNSS/mag stream length mismatch");

  FilterTrace trace;
  trace.states.reserve(n);
  State x = cfg.init_state;
  Mat22 P = cfg.P0;

  const H5x22 Hg = gnss_observation();
  auto fuse_epoch = [&](std::size_t epoch) {
    sensors::GnssMeasurement z = streams.gnss[epoch];
    if (attack) z = attack(z, static_cast<int>(epoch));
    if (cfg.record_gains) {
      const Mat5 S = Hg * P * Hg.transpose() + cfg.noise.R_gnss;
      trace.gnss_gains.push_back(P * Hg.transpose() * S.inverse());
    }
    Vec5 zv;
    zv << z.pos_ne, z.vel_ned;
    trace.innovations.push_back(
        kalman_update<5>(x, P, zv, gnss_predicted(x), Hg, cfg.noise.R_gnss, z.t,
                         MeasSource::Gnss)
            .innovation);
    const auto& zm = streams.mag[epoch];
    trace.innovations.push_back(kalman_update<3>(x, P, zm.field_body, mag_predicted(x),
                                                 mag_observation(x), cfg.noise.R_mag, zm.t,
                                                 MeasSource::Mag)
                                    .innovation);
  };

  fuse_epoch(0);
  trace.states.push_back(x);
  for (std::size_t k = 1; k < n; ++k) {
    const double dt = streams.imu[k].t - streams.imu[k - 1].t;
    predict(x, P, streams.imu[k], dt, cfg.noise, cfg.gravity);
    if (k % sensors::kGnssDecimation == 0) fuse_epoch(k / sensors::kGnssDecimation);
    trace.states.push_back(x);
  }
  return trace;
}

}  // namespace insbench::ekf
