#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shiftest/densities.hpp"
#include "shiftest/errors.hpp"
#include "shiftest/quadrature.hpp"

namespace shiftest {

enum class ShapeFamily { Cosine, CosineMix };

// Regression shape f(x) = sum_k c_k cos(2 pi k x), k >= 1. A finite
// cosine series is symmetric, period-1 and twice differentiable by
// construction, and its first Fourier coefficient is c_1 / 2 in closed
// form, which fourier_first uses as a cross-check on the quadrature.
class ShapeFunction {
public:
  static ShapeFunction cosine(double c1 = 1.0) {
    return ShapeFunction(ShapeFamily::Cosine, {c1});
  }

  static ShapeFunction cosine_mix(std::vector<double> coefficients) {
    if (coefficients.empty())
      throw config_error("shape.coefficients must contain at least one harmonic");
    return ShapeFunction(ShapeFamily::CosineMix, std::move(coefficients));
  }

  static ShapeFunction from_name(std::string_view name, std::vector<double> coefficients) {
    if (name == "cosine") {
      if (coefficients.size() != 1)
        throw config_error("shape family 'cosine' takes exactly one coefficient");
      return cosine(coefficients[0]);
    }
    if (name == "cosine_mix") return cosine_mix(std::move(coefficients));
    throw config_error("unknown shape family '" + std::string(name) +
                       "' (expected 'cosine' or 'cosine_mix')");
  }

  ShapeFamily family() const { return family_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double bound() const { return bound_; }

  double operator()(double x) const {
    if (!std::isfinite(x)) throw std::domain_error("shape argument must be finite");
    const double w = wrap_period(x);
    double value = 0.0;
    for (std::size_t k = 0; k < coefficients_.size(); ++k)
      value += coefficients_[k] * std::cos(2.0 * std::numbers::pi * double(k + 1) * w);
    return value;
  }

  // Wraps into [-1/2, 1/2).
  static double wrap_period(double x) { return x - std::floor(x + 0.5); }

  std::string_view name() const {
    return family_ == ShapeFamily::Cosine ? "cosine" : "cosine_mix";
  }

private:
  ShapeFunction(ShapeFamily family, std::vector<double> coefficients)
      : family_(family), coefficients_(std::move(coefficients)) {
    bound_ = 0.0;
    for (double c : coefficients_) bound_ += std::abs(c);
  }

  ShapeFamily family_;
  std::vector<double> coefficients_;
  double bound_ = 0.0;
};

inline double shape_eval(const ShapeFunction& f, double x) { return f(x); }

// f_1 = int_{-1/2}^{1/2} cos(2 pi x) f(x) dx, by adaptive Simpson,
// cross-checked against the series value c_1 / 2.
inline double fourier_first(const ShapeFunction& f) {
  const double value = quadrature(
      [&](double x) { return std::cos(2.0 * std::numbers::pi * x) * f(x); }, -0.5, 0.5,
      1e-12);
  const double closed_form = 0.5 * f.coefficients().front();
  if (std::abs(value - closed_form) > 1e-9)
    throw numeric_error("first Fourier coefficient quadrature disagrees with series value",
                        value);
  return value;
}

// Mean field of the recursion: phi(x) = sin(2 pi (theta - x)) f_1. Its
// unique zero on the projection interval sits at x = theta.
inline double mean_field_phi(double x, double theta, double f1) {
  return std::sin(2.0 * std::numbers::pi * (theta - x)) * f1;
}

// varphi(t) = int sin^2(2 pi (x - t)) (f^2(x - theta) + sigma^2) / g(x) dx
inline double variance_functional(double t, double theta, const ShapeFunction& f,
                                  const DensityModel& g, double sigma) {
  return quadrature(
      [&](double x) {
        const double s = std::sin(2.0 * std::numbers::pi * (x - t));
        const double fx = f(x - theta);
        return s * s * (fx * fx + sigma * sigma) / g.eval(x);
      },
      -0.5, 0.5, 1e-12);
}

struct AsymptoticQuantities {
  double f1 = 0.0;
  double phi_at_theta = 0.0;
  double xi2 = 0.0;
};

// Limit variance of sqrt(n) (theta_hat - theta):
//   xi^2(theta) = varphi(theta) / (4 pi |f_1| - 1),  valid when 4 pi |f_1| > 1.
inline AsymptoticQuantities asymptotic_variance(double theta, const ShapeFunction& f,
                                                const DensityModel& g, double sigma) {
  const double f1 = fourier_first(f);
  const double gap = 4.0 * std::numbers::pi * std::abs(f1) - 1.0;
  if (!(gap > 0.0))
    throw config_error("CLT condition violated: 4*pi*|f1| <= 1 for this shape");
  const double phi_theta = variance_functional(theta, theta, f, g, sigma);
  return AsymptoticQuantities{f1, phi_theta, phi_theta / gap};
}

}  // namespace shiftest
