#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "shiftest/errors.hpp"

namespace shiftest {

enum class KernelFamily { Epanechnikov, Triangular };

// Smoothing kernel: symmetric, nonnegative, compactly supported on
// [-support_halfwidth, support_halfwidth], Lipschitz, unit mass.
// The moments mu2 = int K^2 and nu2 = (1/2) int x^2 K are stored in
// closed form; unit tests recheck them by quadrature.
struct Kernel {
  KernelFamily family = KernelFamily::Epanechnikov;
  double support_halfwidth = 1.0;
  double mu2 = 0.0;
  double nu2 = 0.0;
  double lipschitz_bound = 0.0;

  double operator()(double x) const {
    if (!std::isfinite(x)) throw std::domain_error("kernel argument must be finite");
    const double a = std::abs(x);
    if (a >= support_halfwidth) return 0.0;
    switch (family) {
      case KernelFamily::Epanechnikov:
        return 0.75 * (1.0 - a * a);
      case KernelFamily::Triangular:
        return 1.0 - a;
    }
    return 0.0;
  }

  static Kernel epanechnikov() {
    // K(x) = 3/4 (1 - x^2) on [-1, 1]: mu2 = 3/5, nu2 = 1/10, |K'| <= 3/2.
    return Kernel{KernelFamily::Epanechnikov, 1.0, 0.6, 0.1, 1.5};
  }

  static Kernel triangular() {
    // K(x) = 1 - |x| on [-1, 1]: mu2 = 2/3, nu2 = 1/12, |K'| = 1.
    return Kernel{KernelFamily::Triangular, 1.0, 2.0 / 3.0, 1.0 / 12.0, 1.0};
  }

  static Kernel from_name(std::string_view name) {
    if (name == "epanechnikov") return epanechnikov();
    if (name == "triangular") return triangular();
    throw config_error("unknown kernel family '" + std::string(name) +
                       "' (expected 'epanechnikov' or 'triangular')");
  }

  std::string_view name() const {
    return family == KernelFamily::Epanechnikov ? "epanechnikov" : "triangular";
  }
};

inline double kernel_eval(const Kernel& k, double x) { return k(x); }

inline std::pair<double, double> kernel_moments(const Kernel& k) {
  return {k.mu2, k.nu2};
}

}  // namespace shiftest
