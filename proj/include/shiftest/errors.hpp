#pragma once

#include <stdexcept>
#include <string>

namespace shiftest {

// Configuration problems: missing keys, values outside the admissible
// region, unparseable files. The CLI maps these to exit code 2.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures (quadrature not converging, degenerate inputs to a
// fit). Carries the best partial estimate when one exists. Exit code 3.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& msg, double partial = 0.0)
      : std::runtime_error(msg), partial_estimate(partial) {}
  double partial_estimate;
};

}  // namespace shiftest
