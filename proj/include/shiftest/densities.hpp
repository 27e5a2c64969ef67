#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "shiftest/errors.hpp"

namespace shiftest {

enum class DensityFamily { Uniform, CosineBump };

// Observation-time density g on [-1/2, 1/2]. Both families are strictly
// positive with two bounded derivatives and integrate to one exactly:
//   Uniform:    g(x) = 1
//   CosineBump: g(x) = 1 + a cos(2 pi x),  |a| < 1
// The CDF has closed form, so sampling is an inverse-CDF solve on a
// strictly increasing function.
class DensityModel {
public:
  static DensityModel uniform() { return DensityModel(DensityFamily::Uniform, 0.0); }

  static DensityModel cosine_bump(double amplitude) {
    if (!(std::abs(amplitude) < 1.0))
      throw config_error("density amplitude must satisfy |a| < 1 to keep g positive");
    return DensityModel(DensityFamily::CosineBump, amplitude);
  }

  static DensityModel from_name(std::string_view name, double amplitude) {
    if (name == "uniform") return uniform();
    if (name == "cosine_bump") return cosine_bump(amplitude);
    throw config_error("unknown density family '" + std::string(name) +
                       "' (expected 'uniform' or 'cosine_bump')");
  }

  DensityFamily family() const { return family_; }
  double amplitude() const { return amplitude_; }
  double min_value() const { return min_value_; }

  double eval(double x) const {
    check_domain(x);
    if (family_ == DensityFamily::Uniform) return 1.0;
    return 1.0 + amplitude_ * std::cos(2.0 * std::numbers::pi * x);
  }

  // G(x) = x + 1/2 + (a / 2 pi) sin(2 pi x)
  double cdf(double x) const {
    check_domain(x);
    if (family_ == DensityFamily::Uniform) return x + 0.5;
    const double two_pi = 2.0 * std::numbers::pi;
    return x + 0.5 + amplitude_ / two_pi * std::sin(two_pi * x);
  }

  // Inverse CDF. Bisection down to 1e-12 brackets the root (G' = g >=
  // min_value > 0), then a Newton step polishes it.
  double sample(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("uniform draw outside [0, 1]");
    if (family_ == DensityFamily::Uniform) return u - 0.5;
    double lo = -0.5, hi = 0.5;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (cdf(mid) < u)
        lo = mid;
      else
        hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
      const double step = (cdf(x) - u) / eval(x);
      x -= step;
      if (x < -0.5) x = -0.5;
      if (x > 0.5) x = 0.5;
    }
    return x;
  }

  std::string_view name() const {
    return family_ == DensityFamily::Uniform ? "uniform" : "cosine_bump";
  }

private:
  DensityModel(DensityFamily family, double amplitude)
      : family_(family),
        amplitude_(amplitude),
        min_value_(family == DensityFamily::Uniform ? 1.0 : 1.0 - std::abs(amplitude)) {}

  static void check_domain(double x) {
    if (!(std::abs(x) <= 0.5)) throw std::domain_error("density argument outside [-1/2, 1/2]");
  }

  DensityFamily family_;
  double amplitude_;
  double min_value_;
};

enum class NoiseFamily { Gaussian, Laplace };

// Centered noise with standard deviation sigma and finite moments of
// every order (Gaussian) or all orders as well (Laplace); both satisfy
// the moment-of-order->2 requirement for the normality result.
class NoiseModel {
public:
  NoiseModel(NoiseFamily family, double sigma) : family_(family), sigma_(sigma) {
    if (!(sigma >= 0.0)) throw config_error("noise sigma must be nonnegative");
  }

  static NoiseModel from_name(std::string_view name, double sigma) {
    if (name == "gaussian") return NoiseModel(NoiseFamily::Gaussian, sigma);
    if (name == "laplace") return NoiseModel(NoiseFamily::Laplace, sigma);
    throw config_error("unknown noise family '" + std::string(name) +
                       "' (expected 'gaussian' or 'laplace')");
  }

  NoiseFamily family() const { return family_; }
  double sigma() const { return sigma_; }

  // Maps a pair of uniforms to one draw. Consuming exactly two uniforms
  // per call regardless of family keeps replication streams aligned
  // across noise configurations.
  double sample(double u1, double u2) const {
    if (sigma_ == 0.0) return 0.0;
    if (family_ == NoiseFamily::Gaussian) {
      // Box-Muller, cosine branch; 1 - u1 lies in (0, 1].
      const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
      return sigma_ * r * std::cos(2.0 * std::numbers::pi * u2);
    }
    // Laplace with variance sigma^2, i.e. scale b = sigma / sqrt(2).
    const double b = sigma_ / std::numbers::sqrt2;
    const double t = (u1 < 0.5) ? std::max(u1, 0x1.0p-53) : std::max(1.0 - u1, 0x1.0p-53);
    const double mag = -b * std::log(2.0 * t);
    return (u1 < 0.5) ? -mag : mag;
  }

  std::string_view name() const {
    return family_ == NoiseFamily::Gaussian ? "gaussian" : "laplace";
  }

private:
  NoiseFamily family_;
  double sigma_;
};

inline double density_eval(const DensityModel& d, double x) { return d.eval(x); }
inline double sample_x(const DensityModel& d, double u) { return d.sample(u); }
inline double sample_noise(const NoiseModel& m, double u1, double u2) {
  return m.sample(u1, u2);
}

}  // namespace shiftest
