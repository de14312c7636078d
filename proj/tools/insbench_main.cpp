// insbench — desk-scale IMU/GNSS integrated-navigation bench with GNSS
// spoofing payloads, residual detectors and mission-trajectory metrics.
//
//   insbench run    --preset traj1-ssd --seeds 30 --out results/
//   insbench sweep  --preset sweep-pos --theta 5,10,20 --out results/
//   insbench ablate --seeds 30 --out results/
//   insbench report results/runs.csv more/runs.csv

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "insbench/csv_io.hpp"
#include "insbench/runner.hpp"

namespace fs = std::filesystem;
using namespace insbench;

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

bench::ScenarioConfig load_scenario(const std::string& preset, const std::string& config_path) {
  if (!preset.empty() && !config_path.empty())
    throw std::invalid_argument("give either --preset or --config, not both");
  if (!preset.empty()) return bench::make_preset(preset);
  if (config_path.empty()) throw std::invalid_argument("one of --preset/--config is required");
  std::ifstream f(config_path);
  if (!f) throw std::invalid_argument("cannot read config: " + config_path);
  nlohmann::json j;
  f >> j;
  return bench::from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMU/GNSS navigation attack bench"};
  app.require_subcommand(1);

  std::string preset, config_path, out_dir = ".", format = "csv";
  std::uint64_t seed = 0;
  int seeds = 0;
  bool dump_trace = false;
  std::string dump_config;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--preset", preset, "named scenario preset");
    cmd->add_option("--config", config_path, "scenario config (JSON)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario over a seed ensemble");
  add_common(run);
  run->add_option("--seed", seed, "single seed (overrides the ensemble)");
  run->add_option("--seeds", seeds, "ensemble size (default from scenario)");
  run->add_flag("--trace", dump_trace, "also write trace.csv for the first seed");
  run->add_option("--dump-config", dump_config, "write the resolved scenario config here");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over theta/alpha/phi");
  add_common(sweep);
  std::string theta_s = "20", alpha_s = "11", phi_s = "0.08";
  int sweep_seeds = 10;
  sweep->add_option("--theta", theta_s, "comma-separated theta values");
  sweep->add_option("--alpha", alpha_s, "comma-separated alpha values");
  sweep->add_option("--phi", phi_s, "comma-separated phi values");
  sweep->add_option("--seeds", sweep_seeds, "seeds per grid point");

  CLI::App* ablate = app.add_subcommand("ablate", "Baseline/SPA/SVA/CCA suite on the mixed flight");
  ablate->add_option("--out", out_dir, "output directory");
  int ablate_seeds = 30;
  ablate->add_option("--seeds", ablate_seeds, "ensemble size");

  CLI::App* report = app.add_subcommand("report", "aggregate runs.csv files");
  std::vector<std::string> report_inputs;
  report->add_option("files", report_inputs, "runs.csv files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out_dir);

    if (run->parsed()) {
      bench::ScenarioConfig cfg = load_scenario(preset, config_path);
      if (seeds > 0) cfg.seed_count = seeds;
      if (!dump_config.empty()) {
        std::ofstream f(dump_config);
        f << bench::to_json(cfg).dump(2) << '\n';
      }
      std::vector<std::uint64_t> seed_list =
          run->count("--seed") ? std::vector<std::uint64_t>{seed} : cfg.seeds();
      const auto results = bench::run_ensemble(cfg, seed_list);
      if (format == "json")
        bench::emit_runs_json(results, (fs::path(out_dir) / "runs.json").string());
      else
        bench::emit_runs_csv(results, (fs::path(out_dir) / "runs.csv").string());
      if (dump_trace && !results.empty())
        bench::emit_trace_csv(results.front(), (fs::path(out_dir) / "trace.csv").string());
      double ade = 0, chi = 0;
      int detected = 0;
      for (const auto& r : results) {
        ade += r.metrics.ade;
        chi += r.metrics.chi_max;
        detected += r.detections.at("chi2").detected ? 1 : 0;
      }
      const double n = static_cast<double>(results.size());
      std::cout << cfg.name << ": seeds=" << results.size() << " mean_ade=" << ade / n
                << " mean_chi_max=" << chi / n << " detected=" << detected << "/"
                << results.size() << "\n";
    } else if (sweep->parsed()) {
      bench::SweepGrid grid;
      grid.base = load_scenario(preset.empty() && config_path.empty() ? "sweep-pos" : preset,
                                config_path);
      grid.thetas = parse_list(theta_s);
      grid.alphas = parse_list(alpha_s);
      grid.phis = parse_list(phi_s);
      grid.seeds_per_point = sweep_seeds;
      const auto rows = bench::sweep_parameters(grid);
      bench::emit_sweep_csv(rows, (fs::path(out_dir) / "sweep.csv").string());
      for (const auto& r : rows)
        std::cout << "theta=" << r.theta << " alpha=" << r.alpha << " phi=" << r.phi
                  << " mean_ade=" << r.mean_ade << " mean_chi_max=" << r.mean_chi_max << "\n";
    } else if (ablate->parsed()) {
      const auto rows = bench::ablation_suite(ablate_seeds);
      std::ofstream f(fs::path(out_dir) / "ablation.csv");
      f << "label,ade_n,ade_e,ade,chi_max\n";
      for (const auto& r : rows) {
        f << r.label << ',' << bench::fmt_g9(r.ade_n) << ',' << bench::fmt_g9(r.ade_e) << ','
          << bench::fmt_g9(r.ade) << ',' << bench::fmt_g9(r.chi_max) << '\n';
        std::cout << r.label << ": ade_n=" << r.ade_n << " ade_e=" << r.ade_e
                  << " chi_max=" << r.chi_max << "\n";
      }
    } else if (report->parsed()) {
      // Aggregate per-scenario means across one or more runs.csv files.
      struct Acc { double ade = 0, fde = 0, apde = 0, chi = 0; int n = 0, detected = 0; };
      std::map<std::string, Acc> acc;
      for (const auto& path : report_inputs) {
        std::ifstream f(path);
        if (!f) throw std::invalid_argument("cannot read " + path);
        std::string line;
        std::getline(f, line);  // header
        while (std::getline(f, line)) {
          std::stringstream ss(line);
          std::vector<std::string> cols;
          std::string c;
          while (std::getline(ss, c, ',')) cols.push_back(c);
          if (cols.size() < 13) continue;
          Acc& a = acc[cols[1]];
          a.ade += std::stod(cols[4]);
          a.fde += std::stod(cols[5]);
          a.apde += std::stod(cols[6]);
          a.chi += std::stod(cols[9]);
          a.detected += cols[10] == "1";
          a.n += 1;
        }
      }
      std::cout << "scenario,n,mean_ade,mean_fde,mean_apde,mean_chi_max,detected\n";
      for (const auto& [name, a] : acc)
        std::cout << name << ',' << a.n << ',' << a.ade / a.n << ',' << a.fde / a.n << ','
                  << a.apde / a.n << ',' << a.chi / a.n << ',' << a.detected << "\n";
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime fault: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
