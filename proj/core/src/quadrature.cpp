#include "hitspec/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hitspec {

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double relative_tolerance) {
  QuadratureResult out;
  if (a == b) return out;
  constexpr unsigned kMaxDepth = 20;
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, kMaxDepth, relative_tolerance, &out.error_estimate);
  return out;
}

}  // namespace hitspec
