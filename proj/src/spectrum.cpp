#include "pwstring/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "pwstring/errors.hpp"

namespace pwstring {

namespace {

using cd = std::complex<double>;
using ComplexFn = std::function<cd(cd)>;

constexpr int kMaxSubdivision = 40;
constexpr double kMaxPhaseStep = 0.5;  // radians per accepted boundary step

struct PhaseWalk {
  const ComplexFn& f;
  bool resolved = true;

  double segment(cd za, cd fa, cd zb, cd fb, int depth) {
    if (fa == 0.0 || fb == 0.0) {
      resolved = false;
      return 0.0;
    }
    const cd ratio = fb / fa;
    const double dphi = std::arg(ratio);
    const double dlog = std::log(std::abs(ratio));
    if (std::abs(dphi) < kMaxPhaseStep && std::abs(dlog) < 1.0) return dphi;
    if (depth >= kMaxSubdivision) {
      resolved = false;
      return dphi;
    }
    const cd zm = 0.5 * (za + zb);
    const cd fm = f(zm);
    return segment(za, fa, zm, fm, depth + 1) + segment(zm, fm, zb, fb, depth + 1);
  }

  double edge(cd z0, cd z1, int nodes) {
    double total = 0.0;
    cd za = z0;
    cd fa = f(za);
    for (int j = 1; j <= nodes; ++j) {
      const cd zb = z0 + (z1 - z0) * (static_cast<double>(j) / nodes);
      const cd fb = f(zb);
      total += segment(za, fa, zb, fb, 0);
      za = zb;
      fa = fb;
    }
    return total;
  }
};

double boundary_winding(const ComplexFn& f, const Rectangle& box, double step, bool& resolved) {
  const cd bl(box.re_min, -box.im_extent);
  const cd br(box.re_max, -box.im_extent);
  const cd tr(box.re_max, box.im_extent);
  const cd tl(box.re_min, box.im_extent);
  const auto nodes = [step](double length) {
    return std::max(4, static_cast<int>(std::ceil(length / step)));
  };
  const double width = box.re_max - box.re_min;
  const double height = 2.0 * box.im_extent;
  PhaseWalk walk{f};
  const double phase = walk.edge(bl, br, nodes(width)) + walk.edge(br, tr, nodes(height)) +
                       walk.edge(tr, tl, nodes(width)) + walk.edge(tl, bl, nodes(height));
  resolved = walk.resolved;
  return phase / (2.0 * kPi);
}

double polish_root(const std::function<double(double)>& fn, double lo, double hi, double flo,
                   double fhi) {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(fn, lo, hi, flo, fhi,
                                                   boost::math::tools::eps_tolerance<double>(42),
                                                   iters);
  return 0.5 * (r.first + r.second);
}

bool on_both_branches(double omega, const StringConfig& cfg) {
  const auto near_integer = [](double v) { return std::abs(v - std::round(v)) < 1e-9 * std::max(1.0, v); };
  return near_integer(omega * cfg.length_one() / kPi) && near_integer(omega * cfg.length_two() / kPi);
}

struct Candidate {
  double omega;
  bool tangential;
};

}  // namespace

int Spectrum::total_multiplicity() const {
  int total = 0;
  for (const auto& e : entries) total += e.multiplicity;
  return total;
}

int Spectrum::count_up_to(double w) const {
  int total = 0;
  for (const auto& e : entries) {
    if (e.omega > w) break;
    total += e.multiplicity;
  }
  return total;
}

ContourCount winding_count(const ComplexFn& f, const Rectangle& box, double base_step) {
  if (!(box.re_max > box.re_min) || !(box.im_extent > 0.0) || !(base_step > 0.0)) {
    throw DomainError("winding_count: degenerate rectangle or step");
  }
  bool ok_coarse = true;
  bool ok_fine = true;
  const double coarse = boundary_winding(f, box, base_step, ok_coarse);
  const double fine = boundary_winding(f, box, 0.5 * base_step, ok_fine);
  const double nearest = std::round(fine);
  if (!ok_coarse || !ok_fine || std::abs(fine - coarse) > 0.01 || std::abs(fine - nearest) > 0.01) {
    std::ostringstream msg;
    msg << "winding number did not stabilise on [" << box.re_min << ", " << box.re_max
        << "] x [-" << box.im_extent << ", " << box.im_extent << "]: " << coarse << " vs " << fine;
    throw NumericalError(msg.str(), fine);
  }
  return {static_cast<int>(nearest), box, fine};
}

double scan_step(const StringConfig& cfg) {
  const double s = cfg.length_ratio();
  return kPi * std::min(1.0, s) / (4.0 * cfg.total_length() * (1.0 + s));
}

Spectrum find_spectrum(const StringConfig& cfg, double omega_max) {
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw DomainError("find_spectrum: omega_max must be positive and finite");
  }
  const double step = scan_step(cfg);
  const auto g = [&cfg](double w) { return dispersion_two_piece(cd(w, 0.0), cfg).real(); };
  const auto dg = [&cfg](double w) { return dispersion_two_piece_derivative(w, cfg); };

  // Grid plus every extremum of g between grid nodes: between two simple roots there is
  // always an extremum, so sign changes over this augmented set bracket close pairs.
  struct Sample {
    double omega;
    double value;
    bool extremum;
  };
  std::vector<Sample> samples;
  // reach far enough past omega_max that the isolating box of the last root sees its neighbour
  const double stop = omega_max + 2.0 * step + 0.5;
  const auto grid_size = static_cast<std::size_t>(std::ceil((stop - 0.5 * step) / step)) + 1;
  samples.reserve(2 * grid_size);
  double w_prev = 0.5 * step;
  double d_prev = dg(w_prev);
  samples.push_back({w_prev, g(w_prev), d_prev == 0.0});
  for (std::size_t i = 1; i < grid_size; ++i) {
    const double w = 0.5 * step + static_cast<double>(i) * step;
    const double d = dg(w);
    if (d_prev * d < 0.0) {
      const double e = polish_root(dg, w_prev, w, d_prev, d);
      samples.push_back({e, g(e), true});
    }
    samples.push_back({w, g(w), d == 0.0});
    w_prev = w;
    d_prev = d;
  }

  std::vector<Candidate> candidates;
  constexpr double kTangentialTolerance = 1e-8;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& a = samples[i];
    if (a.value == 0.0) {
      candidates.push_back({a.omega, a.extremum});
      continue;
    }
    if (a.extremum && std::abs(a.value) <= kTangentialTolerance) {
      candidates.push_back({a.omega, true});
    }
    if (i + 1 < samples.size()) {
      const Sample& b = samples[i + 1];
      if (b.value != 0.0 && (a.value < 0.0) != (b.value < 0.0)) {
        candidates.push_back({polish_root(g, a.omega, b.omega, a.value, b.value), false});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& l, const Candidate& r) { return l.omega < r.omega; });

  // Rounding can split one tangential root into an extremum plus a spurious bracket.
  std::vector<Candidate> merged;
  for (const Candidate& c : candidates) {
    if (!merged.empty() && c.omega - merged.back().omega <= 1e-9 * std::max(1.0, c.omega)) {
      if (c.tangential && !merged.back().tangential) merged.back() = c;
      continue;
    }
    merged.push_back(c);
  }

  const ComplexFn gz = [&cfg](cd z) { return dispersion_two_piece(z, cfg); };
  Spectrum out;
  out.omega_max = omega_max;
  const double ceiling = omega_max * (1.0 + 1e-12);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const double w = merged[i].omega;
    if (w > ceiling) break;
    double gap = w;  // the origin is a double zero of g
    if (i > 0) gap = std::min(gap, w - merged[i - 1].omega);
    if (i + 1 < merged.size()) gap = std::min(gap, merged[i + 1].omega - w);
    const double h = std::min(0.5, 0.5 * gap);
    int multiplicity = 0;
    try {
      multiplicity = winding_count(gz, Rectangle{w - h, w + h, h}, 0.25 * h).zeros_minus_poles;
    } catch (const NumericalError& err) {
      std::ostringstream msg;
      msg << "multiplicity-undecided at omega = " << w << ": " << err.what();
      throw MultiplicityUndecided(msg.str(), w);
    }
    if (multiplicity == 0) continue;
    if (multiplicity < 0) {
      throw MultiplicityUndecided("negative winding around a root of an entire function", w);
    }
    const bool coincident = cfg.tension_ratio() == 0.0 && on_both_branches(w, cfg);
    out.entries.push_back({w, multiplicity, coincident});
  }
  return out;
}

ContourCount count_modes(const StringConfig& cfg, double omega_max, double im_extent) {
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw DomainError("count_modes: omega_max must be positive and finite");
  }
  const double step = scan_step(cfg);
  const double re_min = 0.5 * step;
  if (omega_max <= re_min) {
    return {0, Rectangle{0.0, omega_max, im_extent}, 0.0};
  }
  double re_max = omega_max;
  if (std::abs(dispersion_two_piece(cd(re_max, 0.0), cfg)) < 1e-9) re_max += 0.5 * step;
  const ComplexFn gz = [&cfg](cd z) { return dispersion_two_piece(z, cfg); };
  return winding_count(gz, Rectangle{re_min, re_max, im_extent}, step);
}

Spectrum branch_spectrum_x0(int s, Branch branch, int n_max) {
  if (s < 1) throw DomainError("branch_spectrum_x0: s must be a positive integer");
  if (n_max < 1) throw DomainError("branch_spectrum_x0: n_max must be >= 1");
  const double unit = branch == Branch::first ? 1.0 + s : 1.0 + 1.0 / s;
  Spectrum out;
  for (int n = 1; n <= n_max; ++n) out.entries.push_back({unit * n, 1, false});
  out.omega_max = unit * n_max;
  return out;
}

Spectrum uniform_spectrum(double total_length, double omega_max) {
  if (!(total_length > 0.0) || !(omega_max > 0.0)) {
    throw DomainError("uniform_spectrum: length and omega_max must be positive");
  }
  Spectrum out;
  out.omega_max = omega_max;
  const double unit = 2.0 * kPi / total_length;
  for (long n = 1;; ++n) {
    const double w = unit * static_cast<double>(n);
    if (w > omega_max) break;
    out.entries.push_back({w, 2, false});
  }
  return out;
}

}  // namespace pwstring
