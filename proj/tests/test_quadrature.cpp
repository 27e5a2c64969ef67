#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shiftest/quadrature.hpp"

using shiftest::quadrature;

TEST_SUITE("quadrature") {

TEST_CASE("basic identities") {
  CHECK(quadrature([](double) { return 1.0; }, -0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(quadrature([](double x) { return x; }, -0.5, 0.5)) < 1e-15);
  const double cos2 = quadrature(
      [](double x) { return std::pow(std::cos(2.0 * std::numbers::pi * x), 2); }, -0.5, 0.5);
  CHECK(std::abs(cos2 - 0.5) < 1e-10);
  const double oracle = oracles::riemann(
      [](double x) { return std::pow(std::cos(2.0 * std::numbers::pi * x), 2); }, -0.5, 0.5);
  CHECK(std::abs(cos2 - oracle) < 1e-8);
}

TEST_CASE("harder smooth integrand agrees with the oracle") {
  auto f = [](double x) { return std::exp(std::sin(7.0 * x)) / (1.1 + std::cos(3.0 * x)); };
  const double v = quadrature(f, -0.5, 0.5, 1e-12);
  const double oracle = oracles::riemann(f, -0.5, 0.5, 2'000'000);
  CHECK(std::abs(v - oracle) < 1e-8);
}

TEST_CASE("precondition and failure reporting") {
  CHECK_THROWS_AS(quadrature([](double) { return 1.0; }, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(quadrature([](double) { return 1.0; }, 0.0, 1.0, -1e-10), std::domain_error);
  // An oscillatory integrand with an absurd tolerance and a tiny depth cap
  // cannot converge; the error carries the partial estimate.
  try {
    quadrature([](double x) { return std::sin(500.0 / (std::abs(x) + 1e-3)); }, 0.0, 1.0,
               1e-16, 3);
    CHECK(false);
  } catch (const shiftest::numeric_error& e) {
    CHECK(std::isfinite(e.partial_estimate));
  }
}

}  // TEST_SUITE
