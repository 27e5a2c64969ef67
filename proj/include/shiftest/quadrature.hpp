#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shiftest/errors.hpp"

namespace shiftest {

// Adaptive Simpson integration. The integrands here are smooth and
// periodic, so the recursion terminates quickly; the depth cap exists
// for genuinely misbehaving inputs and reports the partial estimate.
namespace detail {

template <class F>
double simpson_slice(F&& f, double a, double fa, double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(F&& f, double a, double fa, double b, double fb, double m,
                        double fm, double whole, double tol, int depth, int min_depth,
                        bool& failed) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_slice(f, a, fa, m, fm, lm, flm);
  const double right = simpson_slice(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  // The error test is only trusted below min_depth: periodic integrands
  // can alias on the coarse dyadic lattice and look spuriously converged.
  if (min_depth <= 0 && std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    failed = true;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1,
                          min_depth - 1, failed) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1,
                          min_depth - 1, failed);
}

}  // namespace detail

template <class F>
double quadrature(F&& f, double a, double b, double tol = 1e-10, int max_depth = 40,
                  int min_depth = 6) {
  if (!(a < b)) throw std::domain_error("quadrature requires a < b");
  if (!(tol > 0.0)) throw std::domain_error("quadrature tolerance must be positive");
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = detail::simpson_slice(f, a, fa, b, fb, m, fm);
  bool failed = false;
  const double value = detail::adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol,
                                                max_depth, std::min(min_depth, max_depth),
                                                failed);
  if (failed || !std::isfinite(value))
    throw numeric_error("quadrature failed to converge within depth limit", value);
  return value;
}

}  // namespace shiftest
