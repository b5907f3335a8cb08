#include "pwstring/energy_finite_t.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "pwstring/errors.hpp"

namespace pwstring {

namespace {

constexpr double kNegligible = 1e-16;
constexpr std::size_t kMaxTerms = 50'000'000;

void require_positive_temperature(const ThermalConfig& th, const char* who) {
  if (!(th.temperature() > 0.0)) {
    throw DomainError(std::string(who) + ": requires T > 0 (use the zero-temperature energy at T = 0)");
  }
}

// Sums f(xi_n) for n >= 1 until three consecutive summands fall below 1e-16 in magnitude;
// the dropped tail is bounded geometrically from the last two summands.
MatsubaraSum primed_sum(const std::function<double(double)>& f, double static_term,
                        const ThermalConfig& th) {
  MatsubaraSum out{static_term, 0.0, 0.0, 0};
  int quiet = 0;
  double last = 0.0;
  double before_last = 0.0;
  for (std::size_t n = 1;; ++n) {
    if (n > kMaxTerms) {
      throw NumericalError("Matsubara sum did not reach its truncation level",
                           out.value(th.temperature()));
    }
    const double term = f(th.matsubara(n));
    out.dynamic_sum += term;
    out.terms = n;
    before_last = last;
    last = std::abs(term);
    quiet = last < kNegligible ? quiet + 1 : 0;
    if (quiet == 3) break;
  }
  if (last > 0.0 && before_last > 0.0 && last < before_last) {
    const double ratio = last / before_last;
    out.tail_bound = last * ratio / (1.0 - ratio);
  } else {
    out.tail_bound = 3.0 * kNegligible;
  }
  return out;
}

EnergyResult to_energy(const MatsubaraSum& sum, const ThermalConfig& th) {
  const double t = th.temperature();
  return {sum.value(t), EnergyMethod::matsubara, t * sum.tail_bound};
}

}  // namespace

ThermalConfig::ThermalConfig(double temperature) : temperature_(temperature) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw DomainError("temperature must be finite and >= 0, got " + std::to_string(temperature));
  }
}

MatsubaraSum matsubara_two_piece(const StringConfig& cfg, const ThermalConfig& th) {
  require_positive_temperature(th, "casimir_two_piece_thermal");
  const auto f = [&cfg](double xi) { return log_ratio_two_piece(xi, cfg); };
  return primed_sum(f, log_ratio_two_piece(0.0, cfg), th);
}

EnergyResult casimir_two_piece_thermal(const StringConfig& cfg, const ThermalConfig& th) {
  return to_energy(matsubara_two_piece(cfg, th), th);
}

EnergyResult high_t_limit(const StringConfig& cfg, const ThermalConfig& th) {
  require_positive_temperature(th, "high_t_limit");
  return {0.5 * th.temperature() * log_ratio_two_piece(0.0, cfg), EnergyMethod::analytic_limit,
          0.0};
}

EnergyResult mirror_limit(double x, const ThermalConfig& th, MirrorForm form) {
  require_positive_temperature(th, "mirror_limit");
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("mirror_limit: need 0 < x <= 1");
  // ln(1 + 1/F) = ln((1 + x)^2 / 4x) = -ln(1 - alpha^2); exact zero at x = 1.
  const double a = alpha_param(x);
  const double log_term = -std::log1p(-a * a);
  const double prefactor = form == MirrorForm::temperature_restored ? th.temperature() : 1.0;
  return {-0.5 * prefactor * log_term, EnergyMethod::analytic_limit, 0.0};
}

MatsubaraSum matsubara_2n(const NPieceConfig& cfg, const ThermalConfig& th) {
  require_positive_temperature(th, "casimir_2n_thermal");
  const double q_per_xi = cfg.total_length() / cfg.piece_pairs();
  const auto f = [&cfg, q_per_xi](double xi) { return log_ratio_2n(xi * q_per_xi, cfg); };
  return primed_sum(f, log_ratio_2n(0.0, cfg), th);
}

EnergyResult casimir_2n_thermal(const NPieceConfig& cfg, const ThermalConfig& th) {
  return to_energy(matsubara_2n(cfg, th), th);
}

MatsubaraSum matsubara_2n_x0(int piece_pairs, const ThermalConfig& th, double total_length) {
  require_positive_temperature(th, "casimir_2n_thermal_x0");
  if (piece_pairs < 1 || !(total_length > 0.0)) {
    throw DomainError("casimir_2n_thermal_x0: N >= 1 and L > 0 required");
  }
  const double n = piece_pairs;
  // 2 ln|2^N sinh^N(xi L / 2N) / (2 sinh(xi L / 2))|
  const auto f = [n, total_length](double xi) {
    if (n == 1.0) return 0.0;
    return 2.0 * (n * (std::numbers::ln2 + log_sinh(0.5 * xi * total_length / n)) -
                  (std::numbers::ln2 + log_sinh(0.5 * xi * total_length)));
  };
  const double static_term = piece_pairs == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
  return primed_sum(f, static_term, th);
}

EnergyResult casimir_2n_thermal_x0(int piece_pairs, const ThermalConfig& th, double total_length) {
  return to_energy(matsubara_2n_x0(piece_pairs, th, total_length), th);
}

double frequency_ratio(const StringConfig& cfg, const ThermalConfig& th) {
  return th.temperature() * cfg.length_one() / (2.0 * kPi);
}

}  // namespace pwstring
