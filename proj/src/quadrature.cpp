#include "quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace pwstring::detail {

namespace {

QuadratureResult adapt(const std::function<double(double)>& f, double a, double b,
                       double rel_tol, unsigned depth, double abs_tol) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &error);
  if (depth == 0 || error <= std::max(abs_tol, rel_tol * std::abs(value))) return {value, error};
  const double mid = 0.5 * (a + b);
  const auto left = adapt(f, a, mid, rel_tol, depth - 1, 0.5 * abs_tol);
  const auto right = adapt(f, mid, b, rel_tol, depth - 1, 0.5 * abs_tol);
  return {left.value + right.value, left.abs_error + right.abs_error};
}

}  // namespace

QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                               double rel_tol, unsigned max_depth, double abs_tol) {
  if (std::isinf(b)) {
    // x = a + t / (1 - t) on [0, 1)
    const auto mapped = [&f, a](double t) {
      const double u = 1.0 - t;
      return u > 0.0 ? f(a + t / u) / (u * u) : 0.0;
    };
    return adapt(mapped, 0.0, 1.0, rel_tol, max_depth, abs_tol);
  }
  return adapt(f, a, b, rel_tol, max_depth, abs_tol);
}

QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double rel_tol) {
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, a, b, rel_tol, &error, &l1);
  return {value, error};
}

}  // namespace pwstring::detail
