#pragma once

#include <cstddef>

#include "pwstring/core_model.hpp"
#include "pwstring/energy_zero_t.hpp"

namespace pwstring {

/// Temperature in energy units (k_B = 1), T >= 0. Matsubara frequencies xi_n = 2 pi n T.
class ThermalConfig {
 public:
  explicit ThermalConfig(double temperature);

  double temperature() const noexcept { return temperature_; }
  double beta() const noexcept { return 1.0 / temperature_; }
  double matsubara(std::size_t n) const noexcept {
    return 2.0 * kPi * static_cast<double>(n) * temperature_;
  }

 private:
  double temperature_;
};

/// A primed Matsubara sum T sum'_{n>=0} f(xi_n), split into the half-weighted static
/// term f(0) and the n >= 1 part.
struct MatsubaraSum {
  double static_term;   ///< f(0), before the 1/2 weight and the factor T
  double dynamic_sum;   ///< sum_{n>=1} f(xi_n), before the factor T
  double tail_bound;    ///< bound on the dropped terms, before the factor T
  std::size_t terms;    ///< number of n >= 1 terms evaluated

  double value(double temperature) const {
    return temperature * (0.5 * static_term + dynamic_sum);
  }
};

/// Two-piece thermal Casimir energy in Matsubara form,
///   E(T) = T sum'_{n>=0} ln|(F + sinh(xi_n L_I) sinh(s xi_n L_I) / sinh^2((s+1) xi_n L_I / 2)) / (F+1)|.
/// The n = 0 summand uses its xi -> 0 limit (ratio 4s / (s+1)^2). Requires T > 0.
EnergyResult casimir_two_piece_thermal(const StringConfig& cfg, const ThermalConfig& th);
MatsubaraSum matsubara_two_piece(const StringConfig& cfg, const ThermalConfig& th);

/// n = 0 term alone: (T / 2) ln|(F + 4s / (s+1)^2) / (F + 1)|.
EnergyResult high_t_limit(const StringConfig& cfg, const ThermalConfig& th);

enum class MirrorForm {
  temperature_restored,  ///< -(T / 2) ln(1 + 1/F), the s -> inf limit of high_t_limit
  as_printed,            ///< -(1 / 2) ln(1 + 1/F), without the factor T
};

/// s -> inf ("large mirror universe") limit of the high-temperature energy. 0 < x < 1.
EnergyResult mirror_limit(double x, const ThermalConfig& th,
                          MirrorForm form = MirrorForm::temperature_restored);

/// 2N-piece thermal Casimir energy,
///   E_N^T = T sum'_{n>=0} ln|(2(1 - a^2)^N - [l_+^N + l_-^N](i q_n)) / (4 sinh^2(xi_n L / 2))|,
/// q_n = xi_n L / N. The static term is the q -> 0 limit (N - 1) ln(1 - a^2); at x = 0 with
/// N >= 2 it is -inf and so is the returned value (the static mode decouples). The n >= 1
/// part stays available through matsubara_2n.
EnergyResult casimir_2n_thermal(const NPieceConfig& cfg, const ThermalConfig& th);
MatsubaraSum matsubara_2n(const NPieceConfig& cfg, const ThermalConfig& th);

/// x = 0 closed form 2T sum'_{n>=0} ln|2^N sinh^N(xi_n L / 2N) / (2 sinh(xi_n L / 2))|.
/// Same static-term behaviour as casimir_2n_thermal at x = 0.
EnergyResult casimir_2n_thermal_x0(int piece_pairs, const ThermalConfig& th, double total_length);
MatsubaraSum matsubara_2n_x0(int piece_pairs, const ThermalConfig& th, double total_length);

/// omega_T / omega_geom = T L_I / (2 pi). >= 1 is the high-temperature regime.
double frequency_ratio(const StringConfig& cfg, const ThermalConfig& th);

}  // namespace pwstring
