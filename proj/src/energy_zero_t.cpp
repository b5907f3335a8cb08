#include "pwstring/energy_zero_t.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "pwstring/errors.hpp"
#include "quadrature.hpp"

namespace pwstring {

namespace {

constexpr double kAbsTarget = 1e-10;
constexpr double kTailLevel = 1e-16;

void check_target(const char* what, double value, double error) {
  if (!(error <= kAbsTarget) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << what << ": quadrature error estimate " << error << " exceeds target " << kAbsTarget;
    throw NumericalError(msg.str(), value);
  }
}

}  // namespace

std::string_view to_string(EnergyMethod method) {
  switch (method) {
    case EnergyMethod::contour:
      return "contour";
    case EnergyMethod::analytic_limit:
      return "analytic-limit";
    case EnergyMethod::cutoff_oracle:
      return "cutoff-oracle";
    case EnergyMethod::matsubara:
      return "matsubara";
  }
  return "unknown";
}

EnergyResult casimir_two_piece(const StringConfig& cfg) {
  const double a = cfg.alpha();
  if (a == 0.0 || cfg.length_ratio() == 1.0) return {0.0, EnergyMethod::contour, 0.0};

  // |integrand| <= a^2 e^{-2 min(L_I, L_II) xi} (up to a factor of order one).
  const double decay = 2.0 * std::min(cfg.length_one(), cfg.length_two());
  const double cut = std::max(1.0 / decay, std::log(4.0 * a * a / kTailLevel) / decay);
  const auto f = [&cfg](double xi) { return log_ratio_two_piece(xi, cfg); };

  // split at a few decay lengths so the adaptive rule sees a smooth, simple shape per piece
  double value = 0.0;
  double error = 0.0;
  double lo = 0.0;
  for (double hi : {0.5 / decay, 2.0 / decay, 8.0 / decay, cut}) {
    if (hi <= lo) continue;
    const auto piece = detail::gauss_kronrod(f, lo, std::min(hi, cut), 1e-13, 20, 1e-13);
    value += piece.value;
    error += piece.abs_error;
    lo = hi;
    if (lo >= cut) break;
  }
  const double tail = 4.0 * a * a * std::exp(-decay * cut) / decay;
  const double scale = 1.0 / (2.0 * kPi);
  const double energy = scale * value;
  const double err = scale * (error + tail);
  check_target("casimir_two_piece", energy, err);
  return {energy, EnergyMethod::contour, err};
}

EnergyResult casimir_two_piece_x0(double s, double total_length) {
  if (!(s > 0.0) || !(total_length > 0.0)) {
    throw DomainError("casimir_two_piece_x0: s and L must be positive");
  }
  return {-(kPi / (24.0 * total_length)) * (s + 1.0 / s - 2.0), EnergyMethod::analytic_limit, 0.0};
}

EnergyResult casimir_2n(const NPieceConfig& cfg) {
  const int n = cfg.piece_pairs();
  const double a = cfg.alpha();
  if (n == 1 || a == 0.0) return {0.0, EnergyMethod::contour, 0.0};

  // Tail: integrand ~ -2 N a^2 e^{-q}. Near q = 0 it behaves like (N-1) ln(1 - a^2) and,
  // at x = 0, like 2 (N - 1) ln q; tanh-sinh absorbs that endpoint singularity.
  const double cut = std::max(4.0, std::log(2.0 * n * a * a / kTailLevel));
  const auto f = [&cfg](double q) { return log_ratio_2n(q, cfg); };
  const double k = 1.0 - a * a;
  // ln of the ratio changes shape on the scale q ~ sqrt(1 - a^2)
  const double knee = k == 0.0 ? 1.0 : std::clamp(std::sqrt(k), 1e-3, 1.0);

  double value = 0.0;
  double error = 0.0;
  for (const auto& [from, to] : {std::pair{0.0, knee}, std::pair{knee, 1.0}}) {
    if (to <= from) continue;
    const auto head = detail::tanh_sinh(f, from, to);
    value += head.value;
    error += head.abs_error;
  }
  double lo = 1.0;
  for (double hi : {1.0, 4.0, 12.0, cut}) {
    if (hi <= lo) continue;
    const auto piece = detail::gauss_kronrod(f, lo, std::min(hi, cut), 1e-13, 20, 1e-13);
    value += piece.value;
    error += piece.abs_error;
    lo = hi;
    if (lo >= cut) break;
  }
  const double tail = 2.0 * n * a * a * std::exp(-cut);
  const double scale = n / (2.0 * kPi * cfg.total_length());
  const double energy = scale * value;
  const double err = scale * (error + tail);
  check_target("casimir_2n", energy, err);
  return {energy, EnergyMethod::contour, err};
}

EnergyResult casimir_2n_x0(int piece_pairs, double total_length) {
  if (piece_pairs < 1 || !(total_length > 0.0)) {
    throw DomainError("casimir_2n_x0: N >= 1 and L > 0 required");
  }
  const double n = piece_pairs;
  return {-(kPi / (6.0 * total_length)) * (n * n - 1.0), EnergyMethod::analytic_limit, 0.0};
}

double scaling_function(int piece_pairs, double x, double total_length) {
  if (piece_pairs < 2) throw DomainError("scaling_function: f_1 is 0/0, need N >= 2");
  if (!(x > 0.0 && x < 1.0)) throw DomainError("scaling_function: need 0 < x < 1");
  const double e_x = casimir_2n(NPieceConfig(piece_pairs, x, total_length)).value;
  const double e_0 = casimir_2n(NPieceConfig(piece_pairs, 0.0, total_length)).value;
  return e_x / e_0;
}

double scaling_fit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("scaling_fit: need 0 <= x <= 1");
  return std::pow(1.0 - std::sqrt(x), 2.5);
}

}  // namespace pwstring
