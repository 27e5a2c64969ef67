#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "shiftest/config.hpp"
#include "shiftest/estimator.hpp"
#include "shiftest/kde.hpp"
#include "shiftest/rng.hpp"
#include "shiftest/shapes.hpp"
#include "shiftest/stats.hpp"

namespace shiftest {

struct ReplicationResult {
  std::uint64_t rep_id = 0;
  std::vector<std::pair<std::uint64_t, double>> theta_hat_at;      // step -> theta_hat
  std::vector<std::pair<std::uint64_t, double>> kde_sup_error_at;  // plug-in only
  std::uint64_t projection_events = 0;
  std::uint64_t last_projection_step = 0;
  std::uint64_t floor_hits = 0;
  double final_standardized_error = 0.0;  // sqrt(n) (theta_hat_n - theta)
};

struct ExperimentSummary {
  std::map<std::uint64_t, double> mean_abs_error_at;
  std::map<std::uint64_t, double> mse_at;
  double empirical_var_standardized = 0.0;
  double xi2_theoretical = std::numeric_limits<double>::quiet_NaN();
  double ks_statistic = std::numeric_limits<double>::quiet_NaN();
  double ks_pvalue = std::numeric_limits<double>::quiet_NaN();
  std::map<std::uint64_t, std::uint64_t> projection_event_histogram;
  std::uint64_t total_floor_hits = 0;
  // The mse curve is the plain average over replications; no
  // stopping-time conditioning is applied. floor hits flag divisor
  // trouble that would contaminate it.
  std::string mse_caveat = "unconditional mse over all replications; see total_floor_hits";
};

struct ExperimentOutput {
  ExperimentSummary summary;
  std::vector<ReplicationResult> replications;
};

// One seeded replication. The stream of draws is a pure function of
// (cfg.seed, rep_id): one uniform per observation time plus a pair per
// noise draw, so the plug-in and known-density variants see identical
// (X, Y) sequences. The loop evaluates the density estimate at the
// fresh observation first, steps the recursion, and only then absorbs
// the observation into the estimate.
inline ReplicationResult run_replication(const ExperimentConfig& cfg, std::uint64_t rep_id) {
  const ShapeFunction f = cfg.make_shape();
  const DensityModel g = cfg.make_density();
  const NoiseModel noise = cfg.make_noise();
  const Variant variant = cfg.estimator_variant();

  CounterRng rng(cfg.seed, rep_id);
  std::optional<RecursiveKde> kde;
  if (variant == Variant::PlugIn) kde.emplace(cfg.make_kde());

  EstimatorState state;
  state.theta_hat = cfg.estimator.theta0;
  state.sign_f1 = cfg.sign_f1;
  state.variant = variant;
  state.gain_scale = cfg.estimator.gain_scale;

  // Warm-up observations feed the density estimate only. The
  // known-density variant consumes the same draws to stay stream-aligned.
  for (std::uint64_t i = 0; i < cfg.estimator.warmup; ++i) {
    const double x = g.sample(rng.next_uniform());
    if (kde) kde->update(x);
  }

  ReplicationResult result;
  result.rep_id = rep_id;
  auto record_it = cfg.record_points.begin();
  for (std::uint64_t k = 1; k <= cfg.n_steps; ++k) {
    const double x = g.sample(rng.next_uniform());
    const double u1 = rng.next_uniform();
    const double u2 = rng.next_uniform();
    const double y = f(x - cfg.theta_true) + noise.sample(u1, u2);
    if (kde) {
      estimator_step(state, x, y, *kde);
      kde->update(x);
    } else {
      estimator_step(state, x, y, g);
    }
    if (record_it != cfg.record_points.end() && *record_it == k) {
      result.theta_hat_at.emplace_back(k, state.theta_hat);
      if (kde) result.kde_sup_error_at.emplace_back(k, kde->sup_error(g));
      ++record_it;
    }
  }

  result.projection_events = state.projection_events;
  result.last_projection_step = state.last_projection_step;
  result.floor_hits = kde ? kde->floor_hits() : 0;
  result.final_standardized_error =
      std::sqrt(double(cfg.n_steps)) * (state.theta_hat - cfg.theta_true);
  return result;
}

namespace detail {

inline void run_block(const ExperimentConfig& cfg, std::atomic<std::uint64_t>& next,
                      std::vector<ReplicationResult>& out,
                      std::exception_ptr& error, std::mutex& error_mutex) {
  for (;;) {
    const std::uint64_t rep = next.fetch_add(1);
    if (rep >= cfg.n_reps) return;
    try {
      out[rep] = run_replication(cfg, rep);
    } catch (const std::exception& e) {
      std::lock_guard lock(error_mutex);
      if (!error)
        error = std::make_exception_ptr(std::runtime_error(
            "replication " + std::to_string(rep) + " failed: " + e.what()));
      return;
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error)
        error = std::make_exception_ptr(
            std::runtime_error("replication " + std::to_string(rep) + " failed"));
      return;
    }
  }
}

}  // namespace detail

// Runs all replications (optionally across threads; results are merged
// in rep_id order so the summary is schedule-independent) and aggregates
// the Monte Carlo diagnostics.
inline ExperimentOutput run_experiment(ExperimentConfig cfg, unsigned jobs = 1) {
  cfg.validate(false);
  if (cfg.n_reps < 2) throw config_error("n_reps must be at least 2 for variance estimates");

  ExperimentOutput out;
  out.replications.resize(cfg.n_reps);

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, unsigned(cfg.n_reps)));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  if (workers == 1) {
    detail::run_block(cfg, next, out.replications, error, error_mutex);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] { detail::run_block(cfg, next, out.replications, error, error_mutex); });
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ExperimentSummary& s = out.summary;
  for (std::uint64_t p : cfg.record_points) {
    double abs_acc = 0.0, sq_acc = 0.0;
    for (const auto& rep : out.replications) {
      double theta = 0.0;
      for (const auto& [step, value] : rep.theta_hat_at)
        if (step == p) theta = value;
      const double err = theta - cfg.theta_true;
      abs_acc += std::abs(err);
      sq_acc += err * err;
    }
    s.mean_abs_error_at[p] = abs_acc / double(cfg.n_reps);
    s.mse_at[p] = sq_acc / double(cfg.n_reps);
  }

  std::vector<double> standardized;
  standardized.reserve(cfg.n_reps);
  for (const auto& rep : out.replications) {
    standardized.push_back(rep.final_standardized_error);
    ++s.projection_event_histogram[rep.projection_events];
    s.total_floor_hits += rep.floor_hits;
  }
  s.empirical_var_standardized = sample_variance(standardized);

  if (cfg.clt_checks) {
    const auto asym =
        asymptotic_variance(cfg.theta_true, cfg.make_shape(), cfg.make_density(),
                            cfg.noise.sigma);
    s.xi2_theoretical = asym.xi2;
    // The KS comparison needs a respectable sample; small pilot runs
    // still get the theoretical variance.
    if (standardized.size() >= 10) {
      const auto ks = ks_test(standardized, std::sqrt(asym.xi2));
      s.ks_statistic = ks.statistic;
      s.ks_pvalue = ks.pvalue;
    }
  }
  return out;
}

}  // namespace shiftest
