#pragma once

#include <string_view>

#include "pwstring/core_model.hpp"

namespace pwstring {

enum class EnergyMethod { contour, analytic_limit, cutoff_oracle, matsubara };

std::string_view to_string(EnergyMethod method);

/// A regularized energy (units 1/length) relative to the uniform string of the same length.
struct EnergyResult {
  double value;
  EnergyMethod method;
  double abs_error_estimate;
};

/// Zero-temperature Casimir energy of the two-piece string from the imaginary-axis
/// contour integral
///   E = (1/2pi) int_0^inf ln|(F + sinh(xi L_I) sinh(s xi L_I) / sinh^2((s+1) xi L_I / 2)) / (F + 1)| dxi.
/// Exactly zero at s = 1 or x = 1. Throws NumericalError (with the best estimate) if the
/// quadrature misses its 1e-10 absolute target.
EnergyResult casimir_two_piece(const StringConfig& cfg);

/// x -> 0 closed form E = -(pi / 24 L)(s + 1/s - 2).
EnergyResult casimir_two_piece_x0(double s, double total_length);

/// Zero-temperature Casimir energy of the 2N-piece string,
///   E_N = (N / 2 pi L) int_0^inf ln|(2(1 - a^2)^N - [l_+^N + l_-^N]) / (4 sinh^2(N q / 2))| dq,
/// with the integrand assembled in log space. E_1 = 0 and E_N(x = 1) = 0 exactly.
EnergyResult casimir_2n(const NPieceConfig& cfg);

/// x -> 0 closed form E_N(0) = -(pi / 6 L)(N^2 - 1).
EnergyResult casimir_2n_x0(int piece_pairs, double total_length);

/// f_N(x) = E_N(x) / E_N(0), both from quadrature. Requires N >= 2 and 0 < x < 1.
double scaling_function(int piece_pairs, double x, double total_length = kPi);

/// Empirical collapse curve (1 - sqrt(x))^{5/2}.
double scaling_fit(double x);

}  // namespace pwstring
