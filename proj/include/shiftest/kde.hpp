#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shiftest/densities.hpp"
#include "shiftest/kernels.hpp"

namespace shiftest {

// Per-observation bandwidth h_n = n^{-alpha}.
inline double bandwidth(std::uint64_t n, double alpha) {
  if (n == 0) throw std::domain_error("bandwidth index must be >= 1");
  return std::pow(double(n), -alpha);
}

enum class KdeMode { Grid, Exact };

// The regression model is period-1 in everything, so the estimation
// interval [-1/2, 1/2] is one turn of a circle. Periodic mode wraps
// kernel mass across +-1/2 accordingly and the estimate converges
// uniformly; Truncate mode evaluates the interval formula literally and
// loses mass inside a bandwidth of the ends (its divisor bias feeds the
// shift recursion, so it is kept for comparison, not as the default).
enum class KdeBoundary { Periodic, Truncate };

// Recursive kernel density estimator
//   g_n(x) = (1/n) sum_{i=1..n} (1/h_i) K((X_i - x) / h_i),  h_i = i^{-alpha}.
//
// Grid mode keeps the running sum S(x_j) = sum_i K_{h_i}(X_i - x_j) on an
// equispaced lattice over [-1/2, 1/2]; an update only touches the nodes
// inside the kernel support, and evaluation interpolates linearly between
// the two neighbouring nodes. Exact mode keeps the (X_i, h_i) history and
// evaluates the definitional sum; it is the brute-force reference the
// grid is tested against.
//
// Evaluation floors the estimate at floor_eps before it is used as a
// divisor, counting how often the floor binds.
class RecursiveKde {
public:
  RecursiveKde(double alpha, Kernel kernel, KdeMode mode = KdeMode::Grid,
               int grid_size = 2048, double floor_eps = 1e-6,
               KdeBoundary boundary = KdeBoundary::Periodic)
      : alpha_(alpha),
        kernel_(kernel),
        mode_(mode),
        boundary_(boundary),
        grid_size_(grid_size),
        floor_eps_(floor_eps) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::domain_error("bandwidth exponent alpha must lie in (0, 1)");
    if (grid_size < 2) throw std::domain_error("grid size must be at least 2");
    if (!(floor_eps > 0.0)) throw std::domain_error("floor_eps must be positive");
    spacing_ = 1.0 / double(grid_size - 1);
    if (mode_ == KdeMode::Grid) sums_.assign(std::size_t(grid_size), 0.0);
  }

  void update(double x_obs) {
    if (!(std::abs(x_obs) <= 0.5))
      throw std::domain_error("observation outside [-1/2, 1/2]");
    const double h = bandwidth(n_ + 1, alpha_);
    if (mode_ == KdeMode::Exact) {
      history_.emplace_back(x_obs, h);
    } else {
      const double halfwidth = h * kernel_.support_halfwidth;
      const double inv_h = 1.0 / h;
      long lo = long(std::ceil((x_obs - halfwidth + 0.5) / spacing_));
      long hi = long(std::floor((x_obs + halfwidth + 0.5) / spacing_));
      const long period = grid_size_ - 1;  // nodes 0 and grid_size-1 coincide
      if (boundary_ == KdeBoundary::Truncate) {
        lo = std::max(lo, 0L);
        hi = std::min(hi, period);
      }
      for (long j = lo; j <= hi; ++j) {
        // Raw (un-wrapped) node position keeps the distance computation
        // image-correct when the window crosses +-1/2.
        const double xj = -0.5 + double(j) * spacing_;
        const double w = inv_h * kernel_((x_obs - xj) * inv_h);
        if (boundary_ == KdeBoundary::Truncate) {
          sums_[std::size_t(j)] += w;
        } else {
          long jm = j % period;
          if (jm < 0) jm += period;
          sums_[std::size_t(jm)] += w;
          if (jm == 0) sums_[std::size_t(period)] += w;
        }
      }
    }
    ++n_;
  }

  // Floored point evaluation; increments floor_hits when the floor binds.
  double eval(double x) {
    const double raw = eval_raw(x);
    if (raw < floor_eps_) {
      ++floor_hits_;
      return floor_eps_;
    }
    return raw;
  }

  // Unfloored estimate, used by diagnostics.
  double eval_raw(double x) const {
    require_observations();
    if (!(std::abs(x) <= 0.5))
      throw std::domain_error("evaluation point outside [-1/2, 1/2]");
    if (mode_ == KdeMode::Exact) return definitional_sum(x);
    const double t = (x + 0.5) / spacing_;
    long j = long(std::floor(t));
    j = std::clamp(j, 0L, long(grid_size_ - 2));
    const double frac = t - double(j);
    const double s = (1.0 - frac) * sums_[std::size_t(j)] + frac * sums_[std::size_t(j + 1)];
    return s / double(n_);
  }

  // sup over the lattice of |g_n(x_j) - g(x_j)|, on raw (unfloored) values.
  double sup_error(const DensityModel& truth) const {
    require_observations();
    double worst = 0.0;
    for (int j = 0; j < grid_size_; ++j) {
      const double xj = node(j);
      const double est = (mode_ == KdeMode::Grid) ? sums_[std::size_t(j)] / double(n_)
                                                  : definitional_sum(xj);
      worst = std::max(worst, std::abs(est - truth.eval(xj)));
    }
    return worst;
  }

  // Current lattice values of g_n (raw).
  std::vector<double> values() const {
    require_observations();
    std::vector<double> v(std::size_t(grid_size_), 0.0);
    for (int j = 0; j < grid_size_; ++j)
      v[std::size_t(j)] = (mode_ == KdeMode::Grid) ? sums_[std::size_t(j)] / double(n_)
                                                   : definitional_sum(node(j));
    return v;
  }

  std::uint64_t n() const { return n_; }
  std::uint64_t floor_hits() const { return floor_hits_; }
  double alpha() const { return alpha_; }
  double floor_eps() const { return floor_eps_; }
  KdeMode mode() const { return mode_; }
  KdeBoundary boundary() const { return boundary_; }
  int grid_size() const { return grid_size_; }
  double spacing() const { return spacing_; }
  double node(long j) const { return -0.5 + double(j) * spacing_; }
  const Kernel& kernel() const { return kernel_; }

private:
  void require_observations() const {
    if (n_ == 0) throw std::logic_error("no observations absorbed");
  }

  double definitional_sum(double x) const {
    double acc = 0.0;
    if (boundary_ == KdeBoundary::Truncate) {
      for (const auto& [xi, hi] : history_) acc += kernel_((xi - x) / hi) / hi;
    } else {
      for (const auto& [xi, hi] : history_) {
        const double d = xi - x;
        const double reach = hi * kernel_.support_halfwidth;
        // All period-1 images of the observation whose kernel covers x.
        for (long m = long(std::ceil(-reach - d)); m <= long(std::floor(reach - d)); ++m)
          acc += kernel_((d + double(m)) / hi) / hi;
      }
    }
    return acc / double(n_);
  }

  double alpha_;
  Kernel kernel_;
  KdeMode mode_;
  KdeBoundary boundary_;
  int grid_size_;
  double floor_eps_;
  double spacing_ = 0.0;
  std::uint64_t n_ = 0;
  std::uint64_t floor_hits_ = 0;
  std::vector<double> sums_;
  std::vector<std::pair<double, double>> history_;
};

}  // namespace shiftest
