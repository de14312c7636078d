// Offline Q/R grid search: scales a preset's position/velocity process
// noise and reports clean-run ADE and the clean chi-square exceedance rate.
// The shipped preset tunings were picked with this tool.
//
//   insbench_tune --preset traj1-clean --seeds 20

#include <CLI11.hpp>

#include <iostream>
#include <vector>

#include "insbench/runner.hpp"

using namespace insbench;

int main(int argc, char** argv) {
  CLI::App app{"offline Q/R tuning sweep"};
  std::string preset = "traj1-clean";
  int seeds = 20;
  app.add_option("--preset", preset, "base scenario preset");
  app.add_option("--seeds", seeds, "seeds per grid point");
  CLI11_PARSE(app, argc, argv);

  try {
    const bench::ScenarioConfig base = bench::make_preset(preset);
    const std::vector<double> q_scales = {0.25, 0.5, 1.0, 2.0, 4.0};
    const std::vector<double> r_scales = {0.5, 1.0, 2.0};

    std::cout << "q_scale,r_scale,mean_ade,mean_fde,chi_exceed_frac,mean_chi_max\n";
    for (double qs : q_scales) {
      for (double rs : r_scales) {
        bench::ScenarioConfig cfg = base;
        cfg.attack.kind = bench::AttackSelector::None;
        cfg.filter.q_pos *= qs;
        cfg.filter.q_vel *= qs;
        cfg.filter.q_pos_vel *= qs;
        cfg.filter.r_pos *= rs;
        cfg.filter.r_vel *= rs;
        cfg.seed_count = seeds;
        const auto results = bench::run_ensemble(cfg);
        double ade = 0, fde = 0, chi_max = 0;
        std::size_t epochs = 0, exceed = 0;
        for (const auto& r : results) {
          ade += r.metrics.ade;
          fde += r.metrics.fde;
          chi_max += r.metrics.chi_max;
          for (const auto& rec : r.chi_records) {
            ++epochs;
            exceed += rec.flagged ? 1 : 0;
          }
        }
        const double n = static_cast<double>(results.size());
        std::cout << qs << ',' << rs << ',' << ade / n << ',' << fde / n << ','
                  << static_cast<double>(exceed) / static_cast<double>(epochs) << ','
                  << chi_max / n << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
