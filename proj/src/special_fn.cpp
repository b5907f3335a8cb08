#include "pwstring/special_fn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pwstring/errors.hpp"

namespace pwstring {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const double kLogTarget = 18.0 * std::numbers::ln10;  // -ln(1e-18)

// prod_{n=1}^{terms} (1 - q^n), q = e^{2 pi i tau}
cd q_product(cd tau, int terms) {
  const cd q = std::exp(cd(0.0, 2.0 * kPi) * tau);
  cd prod = 1.0;
  cd qn = 1.0;
  for (int n = 1; n <= terms; ++n) {
    qn *= q;
    prod *= 1.0 - qn;
  }
  return prod;
}

cd eta_product(cd tau, int terms) {
  return std::exp(cd(0.0, kPi / 12.0) * tau) * q_product(tau, terms);
}

int eta_terms(double im_tau) {
  return std::max(1, static_cast<int>(std::ceil(kLogTarget / (2.0 * kPi * im_tau))));
}

// Reduces tau into the fundamental domain; returns the complex log of the multiplier m with
// eta(tau_in) = m * eta(tau_out).
cd reduce(cd& tau) {
  cd log_multiplier = 0.0;
  for (int guard = 0; guard < 10'000; ++guard) {
    const double shift = std::round(tau.real());
    tau -= shift;
    log_multiplier += cd(0.0, kPi * shift / 12.0);
    if (std::norm(tau) >= 1.0 - 1e-12) return log_multiplier;
    // eta(tau) = eta(-1/tau) / sqrt(-i tau)
    log_multiplier -= 0.5 * std::log(cd(0.0, -1.0) * tau);
    tau = -1.0 / tau;
  }
  throw NumericalError("modular reduction did not terminate");
}

}  // namespace

ModularPoint::ModularPoint(std::complex<double> tau) : tau_(tau) {
  if (!(tau.imag() > 0.0)) {
    throw DomainError("modular point must lie in the upper half-plane, Im(tau) = " +
                      std::to_string(tau.imag()));
  }
}

SeriesValue dedekind_eta(const ModularPoint& p, std::optional<int> terms) {
  const cd tau = p.tau();
  if (tau.imag() <= 1e-6) {
    throw DomainError("dedekind_eta: Im(tau) <= 1e-6, apply modular lift first");
  }
  const int n = terms.value_or(eta_terms(tau.imag()));
  if (n < 1) throw DomainError("dedekind_eta: need at least one product factor");
  const cd value = eta_product(tau, n);
  // |ln prod_{m > n} (1 - q^m)| <= 2 |q|^{n+1} / (1 - |q|) while |q|^{n+1} <= 1/2
  const double aq = std::exp(-2.0 * kPi * tau.imag());
  const double tail = 2.0 * std::pow(aq, n + 1) / (1.0 - aq);
  return {value, std::abs(value) * std::expm1(tail), n};
}

std::complex<double> dedekind_eta_lifted(std::complex<double> tau) {
  if (!(tau.imag() > 0.0)) throw DomainError("dedekind_eta_lifted: Im(tau) must be > 0");
  const cd log_multiplier = reduce(tau);
  return std::exp(log_multiplier) * eta_product(tau, eta_terms(tau.imag()));
}

double log_abs_eta(std::complex<double> tau) {
  if (!(tau.imag() > 0.0)) throw DomainError("log_abs_eta: Im(tau) must be > 0");
  const cd log_multiplier = reduce(tau);
  return log_multiplier.real() - kPi * tau.imag() / 12.0 +
         std::log(std::abs(q_product(tau, eta_terms(tau.imag()))));
}

SeriesValue jacobi_theta3(double v, std::complex<double> x, std::optional<int> radius) {
  const double y = x.imag();
  if (!(y > 0.0)) throw DomainError("jacobi_theta3: Im(x) must be > 0");
  const int n_star =
      radius.value_or(std::max(1, static_cast<int>(std::ceil(std::sqrt(kLogTarget / y)))));
  if (n_star < 0) throw DomainError("jacobi_theta3: radius must be >= 0");
  cd sum = 1.0;
  for (int n = 1; n <= n_star; ++n) {
    const double nn = static_cast<double>(n) * n;
    sum += 2.0 * std::exp(cd(0.0, 1.0) * x * nn) * std::cos(2.0 * kPi * v * n);
  }
  const double next = static_cast<double>(n_star + 1);
  const double tail =
      2.0 * std::exp(-y * next * next) / (-std::expm1(-y * (2.0 * n_star + 3.0)));
  return {sum, tail, n_star};
}

double log_theta3_imag_minus_one(double y) {
  if (!(y > 0.0)) throw DomainError("log_theta3_imag_minus_one: y must be > 0");
  if (y >= 1.0) {
    double rest = 0.0;
    for (int n = 2;; ++n) {
      const double term = std::exp(-y * (static_cast<double>(n) * n - 1.0));
      rest += term;
      if (term < 1e-18 * (1.0 + rest)) break;
    }
    return std::numbers::ln2 - y + std::log1p(rest);
  }
  // sum_n e^{-y n^2} = sqrt(pi / y) sum_n e^{-pi^2 n^2 / y}
  double dual = 0.0;
  for (int n = 1;; ++n) {
    const double term = std::exp(-kPi * kPi * static_cast<double>(n) * n / y);
    dual += term;
    if (term < 1e-18) break;
  }
  return std::log(std::sqrt(kPi / y) * (1.0 + 2.0 * dual) - 1.0);
}

}  // namespace pwstring
