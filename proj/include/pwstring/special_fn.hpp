#pragma once

// Dedekind eta and Jacobi theta_3 in the conventions
//   eta(tau)    = e^{pi i tau / 12} prod_{n>=1} (1 - e^{2 pi i n tau}),
//   theta3(v|x) = sum_{n in Z} e^{i x n^2 + 2 pi i v n}        (x in the exponent, not a nome),
// with truncation certified by explicit tail bounds.

#include <complex>
#include <optional>

namespace pwstring {

/// A point of the upper half-plane.
class ModularPoint {
 public:
  explicit ModularPoint(std::complex<double> tau);
  std::complex<double> tau() const noexcept { return tau_; }

 private:
  std::complex<double> tau_;
};

struct SeriesValue {
  std::complex<double> value;
  double error_bound;  ///< absolute bound on the truncation error
  int terms;           ///< product factors / summation radius used
};

/// eta by its product formula. Requires Im(tau) > 1e-6 ("apply modular lift" otherwise).
/// `terms` overrides the automatic truncation (|q|^terms < 1e-18) for refinement studies.
SeriesValue dedekind_eta(const ModularPoint& p, std::optional<int> terms = std::nullopt);

/// eta at any point of the upper half-plane: reduces tau to the fundamental domain with
/// eta(tau + 1) = e^{i pi / 12} eta(tau) and eta(-1/tau) = sqrt(-i tau) eta(tau), then
/// applies the product formula there.
std::complex<double> dedekind_eta_lifted(std::complex<double> tau);

/// ln |eta(tau)| through the same reduction; finite where |eta| itself under- or overflows.
double log_abs_eta(std::complex<double> tau);

/// theta3(v|x) by the symmetric sum n = -n*..n*, with n* chosen so |e^{i x n*^2}| < 1e-18.
/// Requires Im(x) > 0. `radius` overrides n*.
SeriesValue jacobi_theta3(double v, std::complex<double> x, std::optional<int> radius = std::nullopt);

/// ln(theta3(0 | i y) - 1) = ln(sum_{n != 0} e^{-y n^2}) for y > 0, accurate for large y
/// (where theta3 - 1 underflows relative to 1) and small y (via Poisson resummation).
double log_theta3_imag_minus_one(double y);

}  // namespace pwstring
