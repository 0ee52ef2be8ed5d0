#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hercules/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

void print_summary(const hercules::SummaryReport& rep) {
  std::printf("%s: %d trial(s), D=%g, median utilization %.4f\n", rep.name.c_str(), rep.trials,
              rep.d_scale, rep.median_utilization);
  std::printf("  %-16s %-12s %14s %10s %10s %10s\n", "connection", "protocol", "avg_rate_bps",
              "mean_sat", "worst_sat", "osc");
  for (const auto& c : rep.connections) {
    std::printf("  %-16s %-12s %14.6g %10.4f %10.4f %10.4f\n", c.id.c_str(),
                hercules::to_string(c.protocol), c.mean_avg_rate, c.mean_satisfaction,
                c.worst_satisfaction, c.mean_oscillation);
  }
  for (const auto& s : rep.segments) {
    if (s.median_delay) {
      std::printf("  segment t=%gs C=%g bps: converged after %.2f s (%d/%d trials)\n", s.start,
                  s.capacity, *s.median_delay, s.converged_trials, rep.trials);
    } else {
      std::printf("  segment t=%gs C=%g bps: no convergence detected\n", s.start, s.capacity);
    }
  }
}

int report_validation(const hercules::ValidationError& e) {
  std::cerr << "validation failed:\n";
  for (const auto& v : e.violations()) std::cerr << "  - " << v << '\n';
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous-requirement congestion control simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::string> out_dir;
  unsigned threads = 0;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write CSV/JSON outputs");
  run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides the scenario)");
  run_cmd->add_option("--threads", threads, "Worker threads for trials (0 = all cores)");
  run_cmd->add_option("--trials", trials, "Override the number of trials");
  run_cmd->add_option("--seed", seed, "Override the base seed");

  std::string param;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario across values of one parameter");
  sweep_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  sweep_cmd->add_option("--param", param, "capacity (bps), loss (fraction), buffer (BDP) or d")
      ->check(CLI::IsMember({"capacity", "loss", "buffer", "d"}));
  sweep_cmd->add_option("--values", values, "Values to sweep (defaults to the scenario's sweep)")
      ->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "Output directory (overrides the scenario)");
  sweep_cmd->add_option("--threads", threads, "Worker threads for trials (0 = all cores)");
  sweep_cmd->add_option("--trials", trials, "Override the number of trials");

  bool ignore_bounds = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "Print HRF and MMF reference allocations");
  oracle_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  oracle_cmd->add_flag("--ignore-bounds", ignore_bounds, "Do not cap bounded connections");

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    auto cfg = hercules::parse_scenario(scenario_path);
    if (trials) cfg.trials = *trials;
    if (seed) cfg.sim.seed = *seed;
    hercules::validate_scenario(cfg);
    hercules::RunOptions opts{threads, out_dir};

    if (*validate_cmd) {
      std::printf("%s: ok (%zu connections, %d trial(s), %g s)\n", cfg.name.c_str(),
                  cfg.sim.connections.size(), cfg.trials, cfg.sim.duration);
      return kExitOk;
    }
    if (*oracle_cmd) {
      const auto entries = hercules::oracle_allocations(cfg.sim, !ignore_bounds);
      std::cout << hercules::oracle_json(entries, cfg.sim).dump(2) << '\n';
      return kExitOk;
    }
    if (*run_cmd) {
      const auto outcome = hercules::run_scenario(cfg, opts);
      print_summary(outcome.summary);
      for (const auto& f : outcome.files) std::printf("wrote %s\n", f.string().c_str());
      return kExitOk;
    }
    if (*sweep_cmd) {
      std::optional<hercules::SweepParam> p;
      if (!param.empty()) p = hercules::parse_sweep_param(param);
      else if (cfg.sweep) p = cfg.sweep->param;
      if (values.empty() && cfg.sweep && (!p || *p == cfg.sweep->param)) values = cfg.sweep->values;
      if (!p || values.empty()) {
        std::cerr << "sweep needs --param and --values, or a scenario with a sweep section\n";
        return kExitValidation;
      }
      const auto rep = hercules::run_sweep(cfg, *p, values, opts);
      for (const auto& point : rep.points) {
        std::printf("== %s = %g\n", hercules::to_string(rep.param), point.value);
        print_summary(point.summary);
      }
      return kExitOk;
    }
  } catch (const hercules::ValidationError& e) {
    return report_validation(e);
  } catch (const hercules::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
