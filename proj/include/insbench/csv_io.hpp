#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "insbench/runner.hpp"

namespace insbench::bench {

/// 9-significant-digit decimal form; fixed formatting keeps emitted files
/// byte-stable across runs.
inline std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline double round_g9(double v) { return std::stod(fmt_g9(v)); }

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // LF line endings everywhere
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

}  // namespace detail

inline void emit_runs_csv(const std::vector<RunResult>& results, const std::string& path) {
  auto f = detail::open_out(path);
  f << "run_id,scenario,attack,seed,ade,fde,apde,ade_n,ade_e,chi_max,detected,latency_s,peak_stat\n";
  std::size_t id = 0;
  for (const auto& r : results) {
    const auto& chi = r.detections.at("chi2");
    f << id++ << ',' << r.scenario << ',' << r.attack_kind << ',' << r.seed << ','
      << fmt_g9(r.metrics.ade) << ',' << fmt_g9(r.metrics.fde) << ',' << fmt_g9(r.metrics.apde)
      << ',' << fmt_g9(r.metrics.ade_n) << ',' << fmt_g9(r.metrics.ade_e) << ','
      << fmt_g9(r.metrics.chi_max) << ',' << (chi.detected ? 1 : 0) << ','
      << (chi.latency ? fmt_g9(*chi.latency) : std::string{}) << ','
      << fmt_g9(chi.peak_statistic) << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline void emit_trace_csv(const RunResult& r, const std::string& path) {
  auto f = detail::open_out(path);
  f << "t,true_n,true_e,est_n,est_e,chi2\n";
  std::size_t k = 0;  // chi records can skip singular epochs; match by time
  for (std::size_t i = 0; i < r.epoch_t.size(); ++i) {
    while (k < r.chi_records.size() && r.chi_records[k].t < r.epoch_t[i] - 1e-6) ++k;
    const bool has_chi = k < r.chi_records.size() && std::abs(r.chi_records[k].t - r.epoch_t[i]) < 1e-6;
    f << fmt_g9(r.epoch_t[i]) << ',' << fmt_g9(r.true_ne[i].x()) << ','
      << fmt_g9(r.true_ne[i].y()) << ',' << fmt_g9(r.est_ne[i].x()) << ','
      << fmt_g9(r.est_ne[i].y()) << ',' << (has_chi ? fmt_g9(r.chi_records[k].statistic) : std::string{})
      << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline void emit_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  auto f = detail::open_out(path);
  f << "theta,alpha,phi,mean_ade,mean_chi_max\n";
  for (const auto& r : rows)
    f << fmt_g9(r.theta) << ',' << fmt_g9(r.alpha) << ',' << fmt_g9(r.phi) << ','
      << fmt_g9(r.mean_ade) << ',' << fmt_g9(r.mean_chi_max) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json run_result_to_json(const RunResult& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["attack"] = r.attack_kind;
  j["seed"] = r.seed;
  j["metrics"] = {{"ade", round_g9(r.metrics.ade)},      {"fde", round_g9(r.metrics.fde)},
                  {"apde", round_g9(r.metrics.apde)},    {"ade_n", round_g9(r.metrics.ade_n)},
                  {"ade_e", round_g9(r.metrics.ade_e)},  {"chi_max", round_g9(r.metrics.chi_max)}};
  for (const auto& [name, rep] : r.detections) {
    nlohmann::json d;
    d["detected"] = rep.detected;
    if (rep.latency) d["latency_s"] = round_g9(*rep.latency);
    d["peak_stat"] = round_g9(rep.peak_statistic);
    d["flagged_fraction"] = round_g9(rep.flagged_fraction);
    j["detections"][name] = d;
  }
  return j;
}

inline void emit_runs_json(const std::vector<RunResult>& results, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) j.push_back(run_result_to_json(r));
  auto f = detail::open_out(path);
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace insbench::bench
