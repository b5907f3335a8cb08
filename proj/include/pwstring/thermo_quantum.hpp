#pragma once

// The quantized two-piece string in the limit of vanishing tension ratio with integer
// length ratio s, at L = pi in D = 26: mass levels, the one-loop free energy of the first
// frequency branch (1 + s) n, its temperature derivatives, and the Hagedorn point.

#include <map>
#include <string_view>
#include <utility>

namespace pwstring {

class QuantumStringConfig {
 public:
  /// s >= 1 (integer length ratio), tension_two = T_II > 0 and finite.
  QuantumStringConfig(int s, double tension_two);

  int length_ratio() const noexcept { return s_; }
  double tension_two() const noexcept { return tension_two_; }
  static constexpr int spacetime_dim = 26;

 private:
  int s_;
  double tension_two_;
};

/// Mean tension T_II s / (1 + s).
double mean_tension(const QuantumStringConfig& cfg);

/// Translational energy p^0 = pi * mean_tension.
double translational_energy(const QuantumStringConfig& cfg);

/// t(s) = pi * mean_tension, the scale multiplying the level sums.
double level_scale(const QuantumStringConfig& cfg);

enum class OscillatorFamily { a, a_tilde, c };

/// Finitely supported occupation numbers of the three oscillator families, keyed by
/// (mode index n >= 1, transverse direction i in 1..24).
class OccupationState {
 public:
  using ModeKey = std::pair<int, int>;
  using Occupations = std::map<ModeKey, long>;

  /// Sets N_{n,i} for one family; a count of zero removes the entry.
  void set(OscillatorFamily family, int n, int i, long count);
  long get(OscillatorFamily family, int n, int i) const;
  const Occupations& modes(OscillatorFamily family) const;

  /// Adds occupations mode by mode.
  OccupationState& operator+=(const OccupationState& other);

 private:
  Occupations& slot(OscillatorFamily family);
  Occupations a_, a_tilde_, c_;
};

/// M^2(occ) - M^2(vacuum) = t sum omega_n (N^a + N^ã) + 2 s t sum omega_n N^c,
/// omega_n = (1 + s) n. The divergent zero-point constants are not part of it.
double mass_squared_excess(const QuantumStringConfig& cfg, const OccupationState& occ);

/// beta_c = (4 / s) sqrt(pi (1 + s) / T_II).
double hagedorn_beta(const QuantumStringConfig& cfg);

/// The inverse temperature below which the free-energy integrand, as written, grows
/// without bound as tau_2 -> 0: beta^2 = 8 pi^2 (1 + 4 s) / (s^2 T_II). It is the point
/// where the theta_3 decay exp(-beta^2 t / 8 pi^2 tau_2) stops beating the eta growth
/// exp(pi (1 + 4 s) / (s (1 + s) tau_2)).
double free_energy_divergence_beta(const QuantumStringConfig& cfg);

enum class ConvergenceFlag { converged, diverged_below_hagedorn };

std::string_view to_string(ConvergenceFlag flag);

struct FreeEnergyResult {
  double free_energy;     ///< NaN when diverged
  double constant_term;   ///< -(1/24)(s + 1/s - 2)
  double integral;        ///< the modular integral, +inf when diverged
  ConvergenceFlag flag;
  double abs_error_estimate;  ///< on free_energy
  double divergence_rate;     ///< fitted kappa in exp(kappa / tau_2) near the lower cut
  double tau2_min;            ///< where the lower-end search stopped
};

/// One-loop free energy of the first branch,
///   F = -(1/24)(s + 1/s - 2) - 2^-40 pi^-26 t^-13 int dtau_2 / tau_2^14 int dtau_1
///       [theta3(0 | i beta^2 t / (8 pi^2 tau_2)) - 1] |eta((1+s) tau)|^-48 eta(2 i s (1+s) tau_2)^-24.
/// The level expansion of the eta factors contains finitely many terms that grow as
/// tau_2 -> infinity (states below the massless level); those are projected out, which
/// leaves the integral convergent at large tau_2. The small-tau_2 end is searched by
/// halving until it settles or is seen to grow. Throws DomainError for beta <= 0 and
/// NumericalError when neither outcome can be established.
FreeEnergyResult free_energy(const QuantumStringConfig& cfg, double beta);

/// Partial integrand data, exposed for tests: ln of the tau_1-averaged eta factor
/// int_0^1 |eta(u + i v)|^-48 du, from the periodic trapezoid rule (v > 0).
double log_eta_average_trapezoid(double v);

/// The same average from its level expansion sum_m P(m)^2 e^{-4 pi v (m - 1)}, where
/// P(m) are the coefficients of prod (1 - q^n)^-24.
double log_eta_average_levels(double v);

/// Coefficient P(m) of q^m in prod_{n>=1} (1 - q^n)^-24, for 0 <= m <= 600.
double partition24(int m);

struct ThermoResult {
  double free_energy;
  double internal_energy;
  double entropy;
  double beta;
  ConvergenceFlag flag;
  double identity_residual;  ///< |F - U + S / beta|
};

/// U = d(beta F)/d beta and S = beta^2 dF/d beta by central differences with
/// h = 1e-3 beta, refined once by Richardson extrapolation against 2h.
/// Requires beta > 1.1 beta_c; throws NumericalError if F diverges at any stencil point.
ThermoResult thermo_derivatives(const QuantumStringConfig& cfg, double beta);

}  // namespace pwstring
