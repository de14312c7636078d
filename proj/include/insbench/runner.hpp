#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "insbench/detectors.hpp"
#include "insbench/ekf.hpp"
#include "insbench/metrics.hpp"
#include "insbench/presets.hpp"
#include "insbench/scenario.hpp"

namespace insbench::bench {

struct RunResult {
  std::string scenario;
  std::string attack_kind;
  std::uint64_t seed = 0;
  metrics::MetricReport metrics;
  std::map<std::string, detect::DetectionReport> detections;  // chi2 / nlc / ltw
  std::vector<detect::DetectionRecord> chi_records;
  // Per-epoch trace for export.
  std::vector<double> epoch_t;
  std::vector<Eigen::Vector2d> true_ne, est_ne;
};

inline traj::Trajectory build_trajectory(const TrajectoryConfig& cfg) {
  traj::TrajectorySample start;
  start.pos = cfg.start_pos;
  start.attitude = traj::yaw_attitude(cfg.start_heading);
  return traj::compose(cfg.segments, start);
}

/// Attack hook for one run. The SSD driver watches the clean feed across
/// all epochs (it owns the clock state); payload attacks draw keyed by
/// (seed, epoch) so paired runs share their payload exactly.
inline ekf::AttackHook make_attack_hook(const AttackConfig& a, std::uint64_t seed) {
  using sensors::GnssMeasurement;
  switch (a.kind) {
    case AttackSelector::None:
      return nullptr;
    case AttackSelector::Bias:
      return [a, seed](const GnssMeasurement& z, int epoch) {
        if (!a.window.contains(z.t)) return z;
        return a.bias_in_degrees
                   ? attacks::bias_attack_degrees(z, a.bias_low, a.bias_high,
                                                  a.ref_latitude_deg, seed, epoch)
                   : attacks::bias_attack(z, a.bias_low, a.bias_high, seed, epoch);
      };
    case AttackSelector::Multiplicative:
      return [a](const GnssMeasurement& z, int) {
        if (!a.window.contains(z.t)) return z;
        return attacks::multiplicative_attack(z, a.mult_factor, a.mult_origin);
      };
    case AttackSelector::Replacement:
      return [a](const GnssMeasurement& z, int) {
        if (!a.window.contains(z.t)) return z;
        GnssMeasurement fake;
        fake.pos_ne = a.repl_pos_ne;
        fake.vel_ned = a.repl_vel;
        return attacks::replacement_attack(z, fake);
      };
    case AttackSelector::Ssd: {
      attacks::AttackParams p = a.ssd;
      p.window = a.window;
      auto ssd = std::make_shared<attacks::SsdAttack>(p, a.ssd_mode, a.ssd_direction,
                                                      a.ssd_positive_accel_only);
      return [ssd](const GnssMeasurement& z, int epoch) { return ssd->apply(z, epoch); };
    }
    case AttackSelector::VelocityBias:
      return [a, seed](const GnssMeasurement& z, int epoch) {
        if (!a.window.contains(z.t)) return z;
        GnssMeasurement out = z;
        auto eng = substream_at(seed, Stream::Attack, static_cast<std::uint64_t>(epoch));
        std::uniform_real_distribution<double> u(a.vel_bias_low, a.vel_bias_high);
        out.vel_ned.x() += u(eng);
        out.vel_ned.y() += u(eng);
        return out;
      };
  }
  return nullptr;
}

inline RunResult run_scenario_with_trace(const ScenarioConfig& cfg, std::uint64_t seed,
                                         ekf::FilterTrace* trace_out) {
  cfg.validate();
  const traj::Trajectory t = build_trajectory(cfg.trajectory);
  const sensors::SensorStreams streams = sensors::synth_all(t, cfg.sensor_params, seed);

  ekf::InitConfig init;
  init.p0_diag = cfg.filter.p0_diag();
  init.geo_field = cfg.sensor_params.ref_field;
  auto [x0, P0] = ekf::init_filter(t.samples.front(), init);

  ekf::RunConfig rc;
  rc.noise = cfg.filter.noise();
  rc.init_state = x0;
  rc.P0 = P0;
  rc.gravity = cfg.sensor_params.gravity;

  ekf::FilterTrace trace = ekf::run_filter(streams, make_attack_hook(cfg.attack, seed), rc);

  RunResult r;
  r.scenario = cfg.name;
  r.attack_kind = to_string(cfg.attack.kind);
  r.seed = seed;

  r.chi_records = detect::chi_square_records(trace.innovations, cfg.detectors.tau);
  const attacks::AttackWindow win =
      cfg.attack.kind == AttackSelector::None ? attacks::AttackWindow{0.0, t.duration() + 1.0}
                                              : cfg.attack.window;
  r.detections["chi2"] = detect::summarize(r.chi_records, win);
  r.detections["nlc"] = detect::summarize(detect::nlc_lite(r.chi_records, cfg.detectors.nlc), win);
  r.detections["ltw"] = detect::summarize(detect::ltw_lite(r.chi_records, cfg.detectors.ltw), win);

  metrics::PosSeries est(trace.states.size()), truth(t.samples.size());
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    est[i] = trace.states[i].pos.head<2>();
    truth[i] = t.samples[i].pos.head<2>();
  }
  r.metrics = metrics::evaluate(est, truth, t.waypoints, r.detections["chi2"].peak_statistic);

  for (std::size_t i = 0; i < trace.states.size(); i += sensors::kGnssDecimation) {
    r.epoch_t.push_back(t.samples[i].t);
    r.true_ne.push_back(truth[i]);
    r.est_ne.push_back(est[i]);
  }
  if (trace_out) *trace_out = std::move(trace);
  return r;
}

inline RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  return run_scenario_with_trace(cfg, seed, nullptr);
}

/// Seed ensemble; runs are independent, execution order does not affect the
/// (seed-ordered) result.
inline std::vector<RunResult> run_ensemble(const ScenarioConfig& cfg,
                                           const std::vector<std::uint64_t>& seeds,
                                           bool parallel = true) {
  std::vector<RunResult> out(seeds.size());
  if (!parallel || seeds.size() <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) out[i] = run_scenario(cfg, seeds[i]);
    return out;
  }
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> futs;
  std::size_t next = 0;
  std::mutex mu;
  for (unsigned w = 0; w < std::min<std::size_t>(hw, seeds.size()); ++w) {
    futs.push_back(std::async(std::launch::async, [&]() {
      while (true) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lk(mu);
          if (next >= seeds.size()) return;
          i = next++;
        }
        out[i] = run_scenario(cfg, seeds[i]);
      }
    }));
  }
  for (auto& f : futs) f.get();
  return out;
}

inline std::vector<RunResult> run_ensemble(const ScenarioConfig& cfg, bool parallel = true) {
  return run_ensemble(cfg, cfg.seeds(), parallel);
}

// ---------------------------------------------------------------------------
// Parameter sweep
// ---------------------------------------------------------------------------

struct SweepGrid {
  ScenarioConfig base;             // must carry an SSD attack
  std::vector<double> thetas{20.0};
  std::vector<double> alphas{11.0};
  std::vector<double> phis{0.08};
  int seeds_per_point = 10;
};

struct SweepRow {
  double theta = 0.0, alpha = 0.0, phi = 0.0;
  double mean_ade = 0.0, mean_chi_max = 0.0;
};

/// One row per (theta, alpha, phi) grid point, lexicographic in the axes;
/// each row aggregates mean ADE and mean chi-square peak over the seeds.
inline std::vector<SweepRow> sweep_parameters(const SweepGrid& grid) {
  if (grid.thetas.empty() || grid.alphas.empty() || grid.phis.empty())
    throw std::invalid_argument("sweep_parameters: empty axis");
  if (grid.base.attack.kind != AttackSelector::Ssd)
    throw std::invalid_argument("sweep_parameters: base scenario must use the ssd attack");
  std::vector<SweepRow> rows;
  for (double th : grid.thetas)
    for (double al : grid.alphas)
      for (double ph : grid.phis) {
        ScenarioConfig cfg = grid.base;
        cfg.attack.ssd.theta = th;
        cfg.attack.ssd.alpha = al;
        cfg.attack.ssd.phi = ph;
        cfg.seed_count = grid.seeds_per_point;
        const auto results = run_ensemble(cfg);
        SweepRow row{th, al, ph, 0.0, 0.0};
        for (const auto& r : results) {
          row.mean_ade += r.metrics.ade;
          row.mean_chi_max += r.metrics.chi_max;
        }
        row.mean_ade /= static_cast<double>(results.size());
        row.mean_chi_max /= static_cast<double>(results.size());
        rows.push_back(row);
      }
  return rows;
}

// ---------------------------------------------------------------------------
// Ablation suite
// ---------------------------------------------------------------------------

struct AblationRow {
  std::string label;
  double ade_n = 0.0, ade_e = 0.0, ade = 0.0, chi_max = 0.0;
};

/// Baseline / SPA / SVA / CCA on the mixed 35 s flight, seed-averaged
/// per-axis displacement errors and chi-square peaks.
inline std::vector<AblationRow> ablation_suite(int seed_count = 30) {
  const char* names[4] = {"ablation-baseline", "ablation-spa", "ablation-sva", "ablation-cca"};
  const char* labels[4] = {"Baseline", "SPA", "SVA", "CCA"};
  std::vector<AblationRow> rows;
  for (int i = 0; i < 4; ++i) {
    ScenarioConfig cfg = make_preset(names[i]);
    cfg.seed_count = seed_count;
    const auto results = run_ensemble(cfg);
    AblationRow row;
    row.label = labels[i];
    for (const auto& r : results) {
      row.ade_n += r.metrics.ade_n;
      row.ade_e += r.metrics.ade_e;
      row.ade += r.metrics.ade;
      row.chi_max += r.metrics.chi_max;
    }
    const double n = static_cast<double>(results.size());
    row.ade_n /= n;
    row.ade_e /= n;
    row.ade /= n;
    row.chi_max /= n;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace insbench::bench
