#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "insbench/attacks.hpp"
#include "insbench/ekf.hpp"

namespace insbench::detect {

struct NlcConfig {
  double drift = 2.6;     // subtracted from sqrt(chi2) each epoch
  double threshold = 8.0;
};
struct LtwConfig {
  int window = 5;         // epochs
  double threshold = 8.9;
};
struct DetectorConfig {
  double tau = 11.1;  // chi-square threshold, 95% confidence at 5 DoF
  NlcConfig nlc;
  LtwConfig ltw;

  void validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("DetectorConfig: tau must be > 0");
    if (ltw.window < 1) throw std::invalid_argument("DetectorConfig: ltw window must be >= 1");
  }
};

struct DetectionRecord {
  double t = 0.0;
  double statistic = 0.0;
  bool flagged = false;
};

struct DetectionReport {
  bool detected = false;
  std::optional<double> latency;  // s since attack start, absent when clean
  double peak_statistic = 0.0;
  double flagged_fraction = 0.0;  // over in-window epochs
};

/// Normalized innovation squared r^T S^-1 r. Throws on a numerically
/// singular S; callers record the failure and skip the epoch.
inline double chi_square_stat(const ekf::Innovation& innov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(innov.S);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > 1e12)
    throw std::runtime_error("chi_square_stat: singular innovation covariance");
  return innov.r.dot(innov.S.ldlt().solve(innov.r));
}

/// Per-epoch chi-square records over the GNSS innovations of a trace.
/// Singular epochs are skipped (detection is observational).
inline std::vector<DetectionRecord> chi_square_records(
    const std::vector<ekf::Innovation>& innovations, double tau) {
  std::vector<DetectionRecord> out;
  for (const auto& in : innovations) {
    if (in.source != ekf::MeasSource::Gnss) continue;
    DetectionRecord rec;
    rec.t = in.t;
    try {
      rec.statistic = chi_square_stat(in);
    } catch (const std::runtime_error&) {
      continue;
    }
    rec.flagged = rec.statistic > tau;
    out.push_back(rec);
  }
  return out;
}

/// CUSUM over the normalized innovation magnitude:
/// s_k = max(0, s_{k-1} + sqrt(chi2_k) - b), flag when s_k > threshold.
class NlcLite {
 public:
  explicit NlcLite(const NlcConfig& cfg) : cfg_(cfg) {}
  DetectionRecord step(double t, double chi2) {
    s_ = std::max(0.0, s_ + std::sqrt(std::max(chi2, 0.0)) - cfg_.drift);
    return {t, s_, s_ > cfg_.threshold};
  }

 private:
  NlcConfig cfg_;
  double s_ = 0.0;
};

/// Sliding-window mean of chi2 over the last w epochs.
class LtwLite {
 public:
  explicit LtwLite(const LtwConfig& cfg) : cfg_(cfg) {
    if (cfg_.window < 1) throw std::invalid_argument("LtwLite: window must be >= 1");
  }
  DetectionRecord step(double t, double chi2) {
    buf_.push_back(chi2);
    sum_ += chi2;
    if (static_cast<int>(buf_.size()) > cfg_.window) {
      sum_ -= buf_.front();
      buf_.pop_front();
    }
    const double mean = sum_ / static_cast<double>(buf_.size());
    return {t, mean, mean > cfg_.threshold};
  }

 private:
  LtwConfig cfg_;
  std::deque<double> buf_;
  double sum_ = 0.0;
};

inline std::vector<DetectionRecord> nlc_lite(const std::vector<DetectionRecord>& chi_records,
                                             const NlcConfig& cfg) {
  NlcLite d(cfg);
  std::vector<DetectionRecord> out;
  out.reserve(chi_records.size());
  for (const auto& r : chi_records) out.push_back(d.step(r.t, r.statistic));
  return out;
}

inline std::vector<DetectionRecord> ltw_lite(const std::vector<DetectionRecord>& chi_records,
                                             const LtwConfig& cfg) {
  LtwLite d(cfg);
  std::vector<DetectionRecord> out;
  out.reserve(chi_records.size());
  for (const auto& r : chi_records) out.push_back(d.step(r.t, r.statistic));
  return out;
}

inline DetectionReport summarize(const std::vector<DetectionRecord>& records,
                                 const attacks::AttackWindow& window) {
  DetectionReport rep;
  std::size_t in_window = 0, flagged_in_window = 0;
  for (const auto& r : records) {
    rep.peak_statistic = std::max(rep.peak_statistic, r.statistic);
    if (r.flagged && !rep.detected) {
      rep.detected = true;
      rep.latency = r.t - window.start;
    }
    if (window.contains(r.t)) {
      ++in_window;
      if (r.flagged) ++flagged_in_window;
    }
  }
  if (in_window > 0)
    rep.flagged_fraction = static_cast<double>(flagged_in_window) / static_cast<double>(in_window);
  return rep;
}

}  // namespace insbench::detect
