#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "insbench/trajectory.hpp"

namespace insbench::metrics {

using Eigen::Vector2d;

/// Horizontal (N, E) position series; the filter updates only the NE
/// position channels, so displacement metrics are horizontal throughout.
using PosSeries = std::vector<Vector2d>;

struct MetricReport {
  double ade = 0.0;    // RMSE of per-frame NE displacement
  double fde = 0.0;    // NE displacement at the final frame
  double apde = 0.0;   // mean NE displacement over waypoints
  double ade_n = 0.0;  // per-axis RMSE
  double ade_e = 0.0;
  std::vector<double> loc_err;  // per-frame NE displacement
  double chi_max = 0.0;         // detector peak for the same run
};

inline std::vector<double> loc_err(const PosSeries& est, const PosSeries& truth) {
  if (est.size() != truth.size()) throw std::invalid_argument("loc_err: length mismatch");
  std::vector<double> out(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) out[i] = (est[i] - truth[i]).norm();
  return out;
}

inline double ade(const PosSeries& est, const PosSeries& truth) {
  if (est.size() != truth.size() || est.empty())
    throw std::invalid_argument("ade: series must be non-empty and equal length");
  double acc = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) acc += (est[i] - truth[i]).squaredNorm();
  return std::sqrt(acc / static_cast<double>(est.size()));
}

inline double fde(const PosSeries& est, const PosSeries& truth) {
  if (est.size() != truth.size() || est.empty())
    throw std::invalid_argument("fde: series must be non-empty and equal length");
  return (est.back() - truth.back()).norm();
}

inline double apde(const PosSeries& est, const PosSeries& truth,
                   const std::vector<traj::Waypoint>& waypoints) {
  if (est.size() != truth.size()) throw std::invalid_argument("apde: length mismatch");
  if (waypoints.empty()) throw std::invalid_argument("apde: needs at least one waypoint");
  double acc = 0.0;
  for (const auto& w : waypoints) {
    if (w.index >= est.size()) throw std::out_of_range("apde: waypoint index out of range");
    acc += (est[w.index] - truth[w.index]).norm();
  }
  return acc / static_cast<double>(waypoints.size());
}

inline double axis_rmse(const PosSeries& est, const PosSeries& truth, int axis) {
  double acc = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double d = est[i](axis) - truth[i](axis);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(est.size()));
}

inline MetricReport evaluate(const PosSeries& est, const PosSeries& truth,
                             const std::vector<traj::Waypoint>& waypoints, double chi_max) {
  MetricReport r;
  r.loc_err = loc_err(est, truth);
  r.ade = ade(est, truth);
  r.fde = r.loc_err.back();
  r.apde = apde(est, truth, waypoints);
  r.ade_n = axis_rmse(est, truth, 0);
  r.ade_e = axis_rmse(est, truth, 1);
  r.chi_max = chi_max;
  return r;
}

}  // namespace insbench::metrics
