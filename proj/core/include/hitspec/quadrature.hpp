#pragma once

#include <functional>

namespace hitspec {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Adaptive 15-point Gauss-Kronrod on [a, b]; either bound may be infinite.
// The integrand must be finite on the open interval.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double relative_tolerance = 1e-10);

}  // namespace hitspec
