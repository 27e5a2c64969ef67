#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftest/config_io.hpp"
#include "shiftest/errors.hpp"
#include "shiftest/simulate.hpp"
#include "shiftest/version.hpp"

namespace shiftest {

struct RunManifest {
  std::string config_digest;
  std::vector<std::string> artifact_paths;
  double wall_time_seconds = 0.0;
  std::string version = kVersion;
};

namespace detail {

// Fixed-width round-trippable formatting keeps CSV bytes identical
// across runs of the same config.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class OutputBatch {
public:
  explicit OutputBatch(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      cleanup();
      throw std::runtime_error("cannot write output file '" + path.string() + "'");
    }
    written_.push_back(path);
    return out;
  }

  void check(std::ofstream& out, const std::string& name) {
    out.flush();
    if (!out) {
      cleanup();
      throw std::runtime_error("write failure on output file '" + name + "'");
    }
  }

  // Removes everything written so far; called when a later file fails.
  void cleanup() {
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }

  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    for (const auto& p : written_) out.push_back(p.string());
    return out;
  }

private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

inline nlohmann::json summary_to_json(const ExperimentSummary& s) {
  nlohmann::json j;
  auto map_to_json = [](const auto& m) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [k, v] : m) o[std::to_string(k)] = v;
    return o;
  };
  j["mean_abs_error_at"] = map_to_json(s.mean_abs_error_at);
  j["mse_at"] = map_to_json(s.mse_at);
  j["empirical_var_standardized"] = s.empirical_var_standardized;
  if (std::isfinite(s.xi2_theoretical)) j["xi2_theoretical"] = s.xi2_theoretical;
  if (std::isfinite(s.ks_statistic)) {
    j["ks_statistic"] = s.ks_statistic;
    j["ks_pvalue"] = s.ks_pvalue;
  }
  j["projection_event_histogram"] = map_to_json(s.projection_event_histogram);
  j["total_floor_hits"] = s.total_floor_hits;
  j["mse_caveat"] = s.mse_caveat;
  return j;
}

}  // namespace detail

// Emits summary.json, mse.csv, standardized_errors.csv, a configurable
// sample of per-replication trajectory CSVs and manifest.json into
// out_dir. Any I/O failure removes the files already written.
inline RunManifest write_outputs(const ExperimentConfig& cfg, const ExperimentSummary& summary,
                                 const std::vector<ReplicationResult>& reps,
                                 const std::string& out_dir, double wall_time_seconds) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + out_dir + "'");

  detail::OutputBatch batch{fs::path(out_dir)};
  try {
    {
      auto out = batch.open("summary.json");
      out << detail::summary_to_json(summary).dump(2) << '\n';
      batch.check(out, "summary.json");
    }
    {
      auto out = batch.open("mse.csv");
      out << "n,mse,mean_abs_error\n";
      for (const auto& [step, mse] : summary.mse_at)
        out << step << ',' << detail::fmt_double(mse) << ','
            << detail::fmt_double(summary.mean_abs_error_at.at(step)) << '\n';
      batch.check(out, "mse.csv");
    }
    {
      auto out = batch.open("standardized_errors.csv");
      out << "rep_id,sqrt_n_error\n";
      for (const auto& rep : reps)
        out << rep.rep_id << ',' << detail::fmt_double(rep.final_standardized_error) << '\n';
      batch.check(out, "standardized_errors.csv");
    }
    const std::uint64_t n_traj = std::min<std::uint64_t>(cfg.output.n_trajectories, reps.size());
    for (std::uint64_t r = 0; r < n_traj; ++r) {
      const std::string name = "trajectory_" + std::to_string(r) + ".csv";
      auto out = batch.open(name);
      out << "n,theta_hat\n";
      for (const auto& [step, theta] : reps[r].theta_hat_at)
        out << step << ',' << detail::fmt_double(theta) << '\n';
      batch.check(out, name);
    }

    RunManifest manifest;
    manifest.config_digest = config_digest(cfg);
    manifest.wall_time_seconds = wall_time_seconds;
    manifest.artifact_paths = batch.paths();
    {
      auto out = batch.open("manifest.json");
      nlohmann::json j;
      j["config_digest"] = manifest.config_digest;
      j["artifact_paths"] = manifest.artifact_paths;
      j["wall_time_seconds"] = manifest.wall_time_seconds;
      j["version"] = manifest.version;
      out << j.dump(2) << '\n';
      batch.check(out, "manifest.json");
    }
    return manifest;
  } catch (...) {
    batch.cleanup();
    throw;
  }
}

// gnuplot script referencing the CSVs written by write_outputs.
inline std::string plot_script(const std::string& out_dir) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set logscale xy\n";
  s += "set xlabel 'n'\n";
  s += "set ylabel 'mse'\n";
  s += "plot '" + out_dir + "/mse.csv' every ::1 using 1:2 with linespoints title 'mse'\n";
  s += "pause -1\n";
  s += "unset logscale\n";
  s += "binwidth = 0.05\n";
  s += "bin(x) = binwidth * floor(x / binwidth)\n";
  s += "set xlabel 'sqrt(n) error'\n";
  s += "set ylabel 'count'\n";
  s += "plot '" + out_dir +
       "/standardized_errors.csv' every ::1 using (bin($2)):(1.0) smooth freq with boxes "
       "title 'standardized errors'\n";
  s += "pause -1\n";
  return s;
}

}  // namespace shiftest
