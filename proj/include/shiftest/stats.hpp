#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "shiftest/errors.hpp"

namespace shiftest {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double mean(std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / double(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::domain_error("variance needs at least two samples");
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / double(xs.size() - 1);
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::domain_error("median of empty sample");
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + long(mid), xs.end());
  double hi = xs[mid];
  if (xs.size() % 2 == 1) return hi;
  std::nth_element(xs.begin(), xs.begin() + long(mid) - 1, xs.end());
  return 0.5 * (hi + xs[mid - 1]);
}

// Regularized upper incomplete gamma Q(a, x), series/continued-fraction
// split at x = a + 1 (Numerical Recipes style). Used for chi-square
// tail probabilities.
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a, sum = term, ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return 1.0 - p;
  }
  // Lentz continued fraction for Q.
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

inline double chi2_pvalue(double statistic, double dof) {
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

struct KsResult {
  double statistic = 0.0;
  double pvalue = 0.0;
};

namespace detail {

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_j (-1)^{j-1} exp(-2 j^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  const double a2 = -2.0 * lambda * lambda;
  double sum = 0.0, sign = 1.0, prev = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * 2.0 * std::exp(a2 * double(j) * double(j));
    sum += term;
    if (std::abs(term) <= 1e-9 * prev || std::abs(term) <= 1e-14 * sum) break;
    prev = std::abs(term);
    sign = -sign;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace detail

// One-sample Kolmogorov-Smirnov test of `samples` against N(0, sigma^2),
// p-value from the asymptotic Kolmogorov distribution with the small-n
// correction sqrt(n) + 0.12 + 0.11/sqrt(n).
inline KsResult ks_test(std::span<const double> samples, double sigma) {
  if (samples.size() < 10) throw std::domain_error("ks_test needs at least 10 samples");
  if (!(sigma > 0.0)) throw std::domain_error("ks_test needs sigma > 0");
  std::vector<double> z(samples.begin(), samples.end());
  for (double& v : z) v /= sigma;
  std::sort(z.begin(), z.end());
  const double n = double(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double cdf = normal_cdf(z[i]);
    d = std::max(d, std::max(double(i + 1) / n - cdf, cdf - double(i) / n));
  }
  const double sn = std::sqrt(n);
  const double pvalue = detail::kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
  return KsResult{d, pvalue};
}

// Least-squares slope of log(mse) against log(n); the empirical decay
// rate read off a handful of checkpoints.
inline double rate_fit(const std::map<std::uint64_t, double>& mse_at) {
  if (mse_at.size() < 3) throw std::domain_error("rate_fit needs at least 3 checkpoints");
  const double span_decades =
      std::log10(double(mse_at.rbegin()->first)) - std::log10(double(mse_at.begin()->first));
  if (span_decades < 2.0 - 1e-9)
    throw std::domain_error("rate_fit checkpoints must span at least two decades");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [step, mse] : mse_at) {
    if (!(mse > 0.0))
      throw numeric_error("rate_fit requires positive mse values", 0.0);
    const double lx = std::log(double(step)), ly = std::log(mse);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = double(mse_at.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace shiftest
