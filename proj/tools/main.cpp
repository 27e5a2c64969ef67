// Experiment CLI: validate configs, run replicated experiments, print the
// theoretical limit variance, and emit a gnuplot script for the outputs.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "shiftest/shiftest.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_validate(const std::string& config_path, bool strict) {
  std::vector<std::string> warnings;
  const auto cfg = shiftest::load_config(config_path, strict, &warnings);
  print_warnings(warnings);
  std::cout << "ok\n";
  std::cout << "config_digest " << shiftest::config_digest(cfg) << '\n';
  return 0;
}

int cmd_variance(const std::string& config_path) {
  const auto cfg = shiftest::load_config(config_path, false);
  const auto q = shiftest::asymptotic_variance(cfg.theta_true, cfg.make_shape(),
                                               cfg.make_density(), cfg.noise.sigma);
  std::printf("f1 %.12g\n", q.f1);
  std::printf("phi_theta %.12g\n", q.phi_at_theta);
  std::printf("xi2 %.12g\n", q.xi2);
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::uint64_t reps_override, std::uint64_t steps_override, bool strict,
            unsigned jobs) {
  std::vector<std::string> warnings;
  auto cfg = shiftest::load_config(config_path, strict, &warnings);
  print_warnings(warnings);
  if (reps_override > 0) cfg.n_reps = reps_override;
  if (steps_override > 0) {
    cfg.n_steps = steps_override;
    std::erase_if(cfg.record_points, [&](std::uint64_t p) { return p > cfg.n_steps; });
    if (cfg.record_points.empty()) cfg.record_points.push_back(cfg.n_steps);
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto result = shiftest::run_experiment(cfg, jobs);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto manifest = shiftest::write_outputs(cfg, result.summary, result.replications,
                                                out_dir, wall);

  const auto& s = result.summary;
  for (const auto& [step, mse] : s.mse_at)
    std::printf("mse n=%llu %.6g (mean_abs_error %.6g)\n",
                static_cast<unsigned long long>(step), mse, s.mean_abs_error_at.at(step));
  std::printf("empirical_var_standardized %.6g\n", s.empirical_var_standardized);
  if (std::isfinite(s.xi2_theoretical))
    std::printf("xi2_theoretical %.6g\n", s.xi2_theoretical);
  if (std::isfinite(s.ks_statistic)) {
    std::printf("ks_statistic %.6g\n", s.ks_statistic);
    std::printf("ks_pvalue %.6g\n", s.ks_pvalue);
  }
  std::printf("total_floor_hits %llu\n",
              static_cast<unsigned long long>(s.total_floor_hits));
  std::printf("wall_time_seconds %.3f\n", wall);
  std::printf("outputs %s (digest %s)\n", out_dir.c_str(), manifest.config_digest.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-parameter estimation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t reps_override = 0;
  std::uint64_t steps_override = 0;
  bool strict = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "path to the JSON config")->required();
  run->add_option("--out-dir", out_dir, "output directory");
  run->add_option("--reps-override", reps_override, "override n_reps");
  run->add_option("--steps-override", steps_override, "override n_steps");
  run->add_flag("--strict", strict, "treat validation warnings as errors");
  run->add_option("--jobs", jobs, "parallel replication budget");

  auto* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", config_path, "path to the JSON config")->required();
  validate->add_flag("--strict", strict, "treat validation warnings as errors");

  auto* variance = app.add_subcommand("variance",
                                      "print f1, phi(theta) and the limit variance xi2");
  variance->add_option("config", config_path, "path to the JSON config")->required();

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot-script", "print a gnuplot script for an output dir");
  plot->add_option("out_dir", plot_dir, "directory written by 'run'")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, out_dir, reps_override, steps_override, strict, jobs);
    if (validate->parsed()) return cmd_validate(config_path, strict);
    if (variance->parsed()) return cmd_variance(config_path);
    if (plot->parsed()) {
      std::cout << shiftest::plot_script(plot_dir);
      return 0;
    }
  } catch (const shiftest::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const shiftest::numeric_error& e) {
    std::cerr << "numeric error: " << e.what()
              << " (partial estimate " << e.partial_estimate << ")\n";
    return kExitNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
