#pragma once

// Thin wrappers over Boost.Math quadrature used by the energy modules.

#include <functional>

namespace pwstring::detail {

struct QuadratureResult {
  double value;
  double abs_error;
};

/// Adaptive Gauss-Kronrod (31 points) on [a, b], b may be +infinity. Bisects until the
/// Kronrod error estimate of a piece is below max(abs_tol, rel_tol |piece|), sharing
/// abs_tol between the halves, or max_depth is reached.
QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-13, unsigned max_depth = 20,
                               double abs_tol = 0.0);

/// Tanh-sinh on [a, b]; tolerant of integrable endpoint singularities.
QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-13);

}  // namespace pwstring::detail
