#pragma once

// Test-side oracles, deliberately independent of the library's own
// numerical paths: brute-force midpoint quadrature, a Taylor-series
// sine, and a plain bisection root finder.

#include <cmath>
#include <functional>

namespace oracles {

// Midpoint rule; error O((b-a)^3 f'' / n^2), ~1e-12 at n = 1e6 for the
// smooth integrands used here.
template <class F>
double riemann(F&& f, double a, double b, int n = 1'000'000) {
  const double h = (b - a) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += f(a + (double(i) + 0.5) * h);
  return acc * h;
}

// Taylor series sine, no <cmath> involvement.
inline double series_sin(double x) {
  // Reduce to [-pi, pi] first for convergence.
  constexpr double two_pi = 6.283185307179586476925286766559;
  x -= two_pi * std::floor(x / two_pi + 0.5);
  double term = x, sum = x;
  for (int k = 1; k <= 25; ++k) {
    term *= -x * x / double((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

// Bisection to width `tol` on a monotone function.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracles
