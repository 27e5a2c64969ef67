#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "shiftest/densities.hpp"
#include "shiftest/kde.hpp"

namespace shiftest {

enum class Variant { PlugIn, KnownDensity };

// Projection onto C = [-1/4, 1/4].
inline double project_c(double x) {
  if (!std::isfinite(x)) throw std::domain_error("projection argument must be finite");
  if (x >= 0.25) return 0.25;
  if (x <= -0.25) return -0.25;
  return x;
}

// Step size gamma_n = scale / n.
inline double gain(std::uint64_t n, double scale = 1.0) {
  if (n == 0) throw std::domain_error("gain index must be >= 1");
  return scale / double(n);
}

// T = sin(2 pi (x - theta_hat)) y / g_at_x. The divisor must already be
// floored by the caller; a nonpositive value is a contract violation.
inline double compute_t_hat(double x, double y, double theta_hat, double g_at_x) {
  if (!(g_at_x > 0.0) || !std::isfinite(g_at_x))
    throw std::invalid_argument("density divisor must be positive (apply the evaluation floor first)");
  return std::sin(2.0 * std::numbers::pi * (x - theta_hat)) * y / g_at_x;
}

// State of the projected recursion
//   theta_{n+1} = pi_C(theta_n + sign(f1) gamma_{n+1} T_{n+1}).
// step counts completed updates; gamma is indexed by the incoming step
// number, so the first update uses gamma_1.
struct EstimatorState {
  double theta_hat = 0.0;
  std::uint64_t step = 0;
  int sign_f1 = +1;
  std::uint64_t projection_events = 0;
  std::uint64_t last_projection_step = 0;
  double last_t_hat = 0.0;
  Variant variant = Variant::PlugIn;
  double gain_scale = 1.0;
};

// Core update with the density value already evaluated at x.
inline void step_with_density(EstimatorState& state, double x, double y, double g_at_x) {
  if (!(std::abs(x) <= 0.5))
    throw std::domain_error("observation outside [-1/2, 1/2]");
  state.last_t_hat = compute_t_hat(x, y, state.theta_hat, g_at_x);
  const double gamma = gain(state.step + 1, state.gain_scale);
  const double unprojected =
      state.theta_hat + double(state.sign_f1) * gamma * state.last_t_hat;
  ++state.step;
  if (std::abs(unprojected) > 0.25) {
    ++state.projection_events;
    state.last_projection_step = state.step;
  }
  state.theta_hat = project_c(unprojected);
}

// Plug-in update: the estimator state of the density is evaluated at x
// BEFORE the caller absorbs x into it, matching the conditioning of the
// recursion (T_{n+1} divides by g_n, not g_{n+1}).
inline void estimator_step(EstimatorState& state, double x, double y, RecursiveKde& kde) {
  step_with_density(state, x, y, kde.eval(x));
}

// Known-density update.
inline void estimator_step(EstimatorState& state, double x, double y,
                           const DensityModel& g) {
  step_with_density(state, x, y, g.eval(x));
}

}  // namespace shiftest
