#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "shiftest/densities.hpp"
#include "shiftest/errors.hpp"
#include "shiftest/estimator.hpp"
#include "shiftest/kde.hpp"
#include "shiftest/kernels.hpp"
#include "shiftest/shapes.hpp"

namespace shiftest {

struct ShapeConfig {
  std::string family = "cosine";
  std::vector<double> coefficients = {1.0};
};

struct DensityConfig {
  std::string family = "uniform";
  double amplitude = 0.0;
};

struct NoiseConfig {
  std::string family = "gaussian";
  double sigma = 0.5;
};

struct KdeConfig {
  double alpha = 0.4;
  int grid_size = 2048;
  double floor_eps = 1e-6;
  std::string mode = "grid";
  std::string kernel = "epanechnikov";
  std::string boundary = "periodic";
};

struct EstimatorConfig {
  double theta0 = 0.0;
  std::uint64_t warmup = 10;
  std::string variant = "plugin";
  double gain_scale = 1.0;
};

struct OutputConfig {
  std::uint64_t n_trajectories = 3;
};

// Declarative experiment description. Everything a replication needs is
// derived from this plus a rep_id, so runs are reproducible by value.
struct ExperimentConfig {
  double theta_true = 0.0;
  int sign_f1 = +1;
  ShapeConfig shape;
  DensityConfig density;
  NoiseConfig noise;
  KdeConfig kde;
  EstimatorConfig estimator;
  std::uint64_t n_steps = 0;
  std::uint64_t n_reps = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> record_points;
  bool clt_checks = true;
  OutputConfig output;

  ShapeFunction make_shape() const {
    return ShapeFunction::from_name(shape.family, shape.coefficients);
  }
  DensityModel make_density() const {
    return DensityModel::from_name(density.family, density.amplitude);
  }
  NoiseModel make_noise() const { return NoiseModel::from_name(noise.family, noise.sigma); }
  Kernel make_kernel() const { return Kernel::from_name(kde.kernel); }
  KdeMode kde_mode() const {
    if (kde.mode == "grid") return KdeMode::Grid;
    if (kde.mode == "exact") return KdeMode::Exact;
    throw config_error("kde.mode must be 'grid' or 'exact'");
  }
  KdeBoundary kde_boundary() const {
    if (kde.boundary == "periodic") return KdeBoundary::Periodic;
    if (kde.boundary == "truncate") return KdeBoundary::Truncate;
    throw config_error("kde.boundary must be 'periodic' or 'truncate'");
  }
  Variant estimator_variant() const {
    if (estimator.variant == "plugin") return Variant::PlugIn;
    if (estimator.variant == "known_density") return Variant::KnownDensity;
    throw config_error("estimator.variant must be 'plugin' or 'known_density'");
  }

  RecursiveKde make_kde() const {
    return RecursiveKde(kde.alpha, make_kernel(), kde_mode(), kde.grid_size, kde.floor_eps,
                        kde_boundary());
  }

  // Fill defaulted record points and validate every admissibility
  // condition. Returns human-readable warnings for conditions that are
  // soft in lenient mode; strict mode turns them into errors.
  std::vector<std::string> validate(bool strict = false) {
    std::vector<std::string> warnings;
    if (!(std::abs(theta_true) < 0.25))
      throw config_error("theta outside admissible set C: require |theta_true| < 1/4");
    if (!(std::abs(estimator.theta0) <= 0.25))
      throw config_error("estimator.theta0 must start inside C = [-1/4, 1/4]");
    if (sign_f1 != 1 && sign_f1 != -1) throw config_error("sign_f1 must be +1 or -1");
    if (n_steps == 0) throw config_error("n_steps must be positive");
    if (n_reps == 0) throw config_error("n_reps must be positive");
    if (!(kde.alpha > 0.0 && kde.alpha < 1.0))
      throw config_error("kde.alpha must lie in (0, 1)");
    if (!(estimator.gain_scale > 0.0))
      throw config_error("estimator.gain_scale must be positive");
    if (estimator.variant == "plugin" && estimator.warmup == 0)
      throw config_error(
          "estimator.warmup must be >= 1 for the plug-in variant (the density estimate "
          "needs at least one observation before it can be evaluated)");

    // Instantiating the models runs their own checks.
    (void)make_shape();
    (void)make_density();
    (void)make_noise();
    (void)make_kernel();
    (void)kde_mode();
    (void)kde_boundary();
    (void)estimator_variant();
    if (kde.grid_size < 2) throw config_error("kde.grid_size must be at least 2");
    if (!(kde.floor_eps > 0.0)) throw config_error("kde.floor_eps must be positive");

    if (record_points.empty()) {
      for (std::uint64_t p : {std::uint64_t(100), std::uint64_t(1000), std::uint64_t(10000),
                              std::uint64_t(100000)})
        if (p <= n_steps) record_points.push_back(p);
      if (record_points.empty()) record_points.push_back(n_steps);
    }
    std::sort(record_points.begin(), record_points.end());
    record_points.erase(std::unique(record_points.begin(), record_points.end()),
                        record_points.end());
    for (std::uint64_t p : record_points)
      if (p < 1 || p > n_steps)
        throw config_error("record_points must lie within [1, n_steps]");

    if (clt_checks) {
      const double f1 = fourier_first(make_shape());
      if (!(4.0 * std::numbers::pi * std::abs(f1) > 1.0))
        throw config_error("CLT condition violated: 4*pi*|f1| <= 1");
      if ((f1 > 0.0 ? +1 : -1) != sign_f1)
        warnings.push_back("sign_f1 disagrees with the sign of the shape's first Fourier coefficient");
      if (!(kde.alpha > 0.25 && kde.alpha < 0.5)) {
        const std::string msg =
            "kde.alpha outside (1/4, 1/2): asymptotic normality is not guaranteed";
        if (strict) throw config_error(msg);
        warnings.push_back(msg);
      }
    }
    return warnings;
  }
};

}  // namespace shiftest
