#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "pwstring/core_model.hpp"

namespace pwstring {

struct SpectralLine {
  double omega;
  int multiplicity;
  /// x = 0 only: omega lies on both branches (1 + s) n and (1 + 1/s) n. The multiplicity
  /// is still whatever the local winding integral reports.
  bool branch_coincidence = false;
};

/// Eigenfrequencies in (0, omega_max], strictly increasing, with multiplicities.
struct Spectrum {
  std::vector<SpectralLine> entries;
  double omega_max = 0.0;

  /// Number of modes counted with multiplicity.
  int total_multiplicity() const;
  /// Multiplicity-weighted count of modes with omega <= w.
  int count_up_to(double w) const;
};

/// Axis-aligned rectangle (re_min, re_max) x (-im_extent, +im_extent) in the complex plane.
struct Rectangle {
  double re_min;
  double re_max;
  double im_extent;
};

struct ContourCount {
  int zeros_minus_poles;
  Rectangle contour;
  /// accumulated phase / 2 pi before rounding
  double winding;
};

/// Argument-principle count of zeros minus poles of an analytic f inside the rectangle,
/// by phase tracking along its boundary with adaptive subdivision. The count must agree
/// between the base and a doubled boundary resolution and land within 0.01 of an
/// integer; otherwise NumericalError. `base_step` bounds the initial node spacing.
ContourCount winding_count(const std::function<std::complex<double>(std::complex<double>)>& f,
                           const Rectangle& box, double base_step);

/// Root-scan grid spacing pi min(1, s) / (4 L (1 + s)).
double scan_step(const StringConfig& cfg);

/// All zeros of the two-piece dispersion relation in (0, omega_max] with multiplicities.
/// Odd-order roots are bracketed by sign changes and polished to 1e-12 relative; even-order
/// (tangential) roots are found as extrema of g where |g| vanishes. Every candidate's
/// multiplicity is fixed by a winding integral on a box of half-size min(0.5, half the
/// distance to the nearest neighbour); a box winding of zero discards the candidate.
/// Throws MultiplicityUndecided when a local winding fails to stabilise.
Spectrum find_spectrum(const StringConfig& cfg, double omega_max);

/// Number of zeros (with multiplicity) of g in (0, omega_max) from one contour integral.
/// When omega_max is itself a root the contour edge is moved right by half a scan step.
ContourCount count_modes(const StringConfig& cfg, double omega_max, double im_extent = 0.5);

enum class Branch { first, second };

/// x -> 0 branch frequencies for integer s: (1 + s) n (first) or (1 + 1/s) n (second),
/// n = 1..n_max, each with multiplicity 1.
Spectrum branch_spectrum_x0(int s, Branch branch, int n_max);

/// Closed uniform string of length L: omega_n = 2 pi n / L, each doubly degenerate.
Spectrum uniform_spectrum(double total_length, double omega_max);

}  // namespace pwstring
