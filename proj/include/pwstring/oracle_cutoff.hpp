#pragma once

// Independent check on the contour energies: exponentially damped mode sums over explicit
// spectra, minus the same sum for the uniform closed string of equal length, extrapolated
// to zero damping. It is slow: every mode up to the cutoff tail is summed.

#include <utility>
#include <vector>

#include "pwstring/core_model.hpp"
#include "pwstring/spectrum.hpp"

namespace pwstring {

struct CutoffSample {
  double epsilon;
  double damped_difference;
};

struct CutoffResult {
  double extrapolated_energy;
  std::vector<CutoffSample> epsilon_samples;  ///< decreasing in epsilon
  double fit_residual;                        ///< max |fit - sample|
  double abs_error_estimate;                  ///< residual plus the c0 shift when the coarsest sample is dropped
  std::vector<double> coefficients;           ///< c0, c1, c2 of c0 + c1 eps + c2 eps^2
};

/// (1/2) sum multiplicity * omega * exp(-epsilon omega). Requires
/// spec.omega_max * epsilon >= 40 so the truncated tail is below ~1e-17.
double damped_mode_sum(const Spectrum& spec, double epsilon);

/// Default damping grid {0.05, 0.025, 0.0125, 0.00625, 0.003125} * L.
std::vector<double> default_epsilons(double total_length);

/// Casimir energy by the cutoff method. Needs at least 4 strictly decreasing epsilons,
/// the smallest >= 1e-3. Throws NumericalError("extrapolation unstable") when the
/// quadratic fit residual exceeds 1e-3 |c0| + 1e-6.
CutoffResult casimir_by_cutoff(const StringConfig& cfg, const std::vector<double>& epsilons);
CutoffResult casimir_by_cutoff(const StringConfig& cfg);

}  // namespace pwstring
