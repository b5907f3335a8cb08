#include "pwstring/thermo_quantum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pwstring/energy_zero_t.hpp"
#include "pwstring/errors.hpp"
#include "pwstring/special_fn.hpp"
#include "quadrature.hpp"

namespace pwstring {

namespace {

constexpr double kPiQ = 3.14159265358979323846;
constexpr int kMaxLevel = 600;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Level expansion is used for v = (1 + s) tau_2 at or above this; the trapezoid below it.
constexpr double kLevelSwitch = 0.2;
constexpr double kSettled = 1e-8;
constexpr double kGrowth = 10.0;
constexpr double kTau2Floor = 5e-4;

const std::array<double, kMaxLevel + 1>& log_partition_table() {
  static const std::array<double, kMaxLevel + 1> table = [] {
    // n P(n) = 24 sum_{k=1}^{n} sigma(k) P(n - k)
    std::array<double, kMaxLevel + 1> sigma{};
    for (int d = 1; d <= kMaxLevel; ++d) {
      for (int m = d; m <= kMaxLevel; m += d) sigma[m] += d;
    }
    // P(600) ~ e^265: doubles hold it, and every summand is positive.
    std::array<double, kMaxLevel + 1> p{};
    p[0] = 1.0;
    for (int n = 1; n <= kMaxLevel; ++n) {
      double acc = 0.0;
      for (int k = 1; k <= n; ++k) acc += sigma[k] * p[n - k];
      p[n] = 24.0 * acc / n;
    }
    std::array<double, kMaxLevel + 1> out{};
    for (int n = 0; n <= kMaxLevel; ++n) out[n] = std::log(p[n]);
    return out;
  }();
  return table;
}

// Log-sum-exp accumulator.
class LogSum {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term > max_) {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    } else {
      sum_ += std::exp(log_term - max_);
    }
  }
  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

double log_add(double a, double b) {
  LogSum s;
  s.add(a);
  s.add(b);
  return s.value();
}

// ln sum_{m >= m0} P(m)^2 e^{-rate (m - 1)}
double level_tail(int m0, double rate) {
  const auto& lp = log_partition_table();
  LogSum sum;
  double peak = kNegInf;
  for (int m = m0;; ++m) {
    if (m > kMaxLevel) throw NumericalError("level expansion needs more than 600 levels");
    const double term = 2.0 * lp[m] - rate * (m - 1);
    sum.add(term);
    peak = std::max(peak, term);
    if (term < peak - 45.0 && term < sum.value() - 45.0) break;
  }
  return sum.value();
}

double log_eta_power(std::complex<double> tau, double power) { return power * log_abs_eta(tau); }

struct Model {
  int s;
  double t;
  double c;  // beta^2 t / 8 pi^2

  double tau_top() const { return kLevelSwitch / (1.0 + s); }

  // ln of the tau_1-averaged eta product with below-massless levels removed.
  double log_eta_factor(double tau2) const {
    const double a = 4.0 * kPiQ * (1.0 + s) * tau2;  // rate per unit of m - 1
    const double b = s * a;                          // rate per unit of k - 1
    const auto& lp = log_partition_table();
    if ((1.0 + s) * tau2 >= kLevelSwitch) {
      const double h_all = level_tail(0, a);
      LogSum g;
      g.add(b + level_tail(s + 1, a));   // k = 0 keeps m >= s + 1
      g.add(lp[1] + level_tail(1, a));   // k = 1 keeps m >= 1
      double peak = kNegInf;
      for (int k = 2;; ++k) {
        if (k > kMaxLevel) throw NumericalError("level expansion needs more than 600 levels");
        const double term = lp[k] - b * (k - 1) + h_all;
        g.add(term);
        peak = std::max(peak, term);
        if (term < g.value() - 45.0) break;
      }
      return g.value();
    }
    const double full = log_eta_average_trapezoid((1.0 + s) * tau2) +
                        log_eta_power({0.0, 2.0 * s * (1.0 + s) * tau2}, -24.0);
    LogSum tachyonic;
    for (int m = 0; m <= s; ++m) tachyonic.add(2.0 * lp[m] - a * (m - 1) + b);
    tachyonic.add(lp[1] + a);
    const double ratio = std::exp(tachyonic.value() - full);
    if (!(ratio < 0.5)) {
      throw NumericalError("projection of sub-massless levels lost precision at tau_2 = " +
                           std::to_string(tau2));
    }
    return full + std::log1p(-ratio);
  }

  // Exact where it exceeds `floor`; below it the cheap upper bound from
  // |eta(u + iv)| >= eta(iv) may be returned instead.
  double log_integrand(double tau2, double floor = kNegInf) const {
    const double head = -14.0 * std::log(tau2) + log_theta3_imag_minus_one(c / tau2);
    if (floor > kNegInf && (1.0 + s) * tau2 < kLevelSwitch) {
      const double bound = head + log_eta_power({0.0, (1.0 + s) * tau2}, -48.0) +
                           log_eta_power({0.0, 2.0 * s * (1.0 + s) * tau2}, -24.0);
      if (bound < floor) return bound;
    }
    return head + log_eta_factor(tau2);
  }
};

struct LogIntegral {
  double log_value;
  double rel_error;
};

// ln int_lo^hi exp(g), with g rescaled by its largest sampled value. Nodes more than
// e^60 below that value may be bounded rather than evaluated.
LogIntegral log_integral(const Model& model, double lo, double hi, double scale) {
  const auto f = [&](double x) {
    const double v = model.log_integrand(x, scale - 60.0) - scale;
    return std::isfinite(v) || v < 0.0 ? std::exp(v) : std::numeric_limits<double>::infinity();
  };
  const auto r = detail::gauss_kronrod(f, lo, hi, 1e-10, 12);
  if (!(r.value > 0.0)) return {kNegInf, 0.0};
  return {scale + std::log(r.value), r.abs_error / r.value};
}

// ln f = a + kappa / tau + p ln tau through three samples.
double fit_kappa(const Model& model, double tau) {
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    const double x = tau * std::pow(2.0, i);
    m(i, 0) = 1.0;
    m(i, 1) = 1.0 / x;
    m(i, 2) = std::log(x);
    rhs(i) = model.log_integrand(x);
  }
  return m.colPivHouseholderQr().solve(rhs)(1);
}

double prefactor(double t) {
  return std::exp(-40.0 * std::numbers::ln2 - 26.0 * std::log(kPiQ) - 13.0 * std::log(t));
}

}  // namespace

QuantumStringConfig::QuantumStringConfig(int s, double tension_two)
    : s_(s), tension_two_(tension_two) {
  if (s < 1) throw DomainError("length ratio s must be an integer >= 1, got " + std::to_string(s));
  if (!(tension_two > 0.0) || !std::isfinite(tension_two)) {
    throw DomainError("tension T_II must be finite and > 0");
  }
}

double mean_tension(const QuantumStringConfig& cfg) {
  const double s = cfg.length_ratio();
  return cfg.tension_two() * s / (1.0 + s);
}

double translational_energy(const QuantumStringConfig& cfg) { return kPiQ * mean_tension(cfg); }

double level_scale(const QuantumStringConfig& cfg) { return kPiQ * mean_tension(cfg); }

void OccupationState::set(OscillatorFamily family, int n, int i, long count) {
  if (n < 1) throw DomainError("mode index n must be >= 1");
  if (i < 1 || i > 24) throw DomainError("transverse direction must lie in 1..24");
  if (count < 0) throw DomainError("occupation numbers must be >= 0");
  auto& modes = slot(family);
  if (count == 0) {
    modes.erase({n, i});
  } else {
    modes[{n, i}] = count;
  }
}

long OccupationState::get(OscillatorFamily family, int n, int i) const {
  const auto& m = modes(family);
  const auto it = m.find({n, i});
  return it == m.end() ? 0 : it->second;
}

const OccupationState::Occupations& OccupationState::modes(OscillatorFamily family) const {
  switch (family) {
    case OscillatorFamily::a: return a_;
    case OscillatorFamily::a_tilde: return a_tilde_;
    case OscillatorFamily::c: return c_;
  }
  throw DomainError("unknown oscillator family");
}

OccupationState::Occupations& OccupationState::slot(OscillatorFamily family) {
  return const_cast<Occupations&>(std::as_const(*this).modes(family));
}

OccupationState& OccupationState::operator+=(const OccupationState& other) {
  for (auto family : {OscillatorFamily::a, OscillatorFamily::a_tilde, OscillatorFamily::c}) {
    for (const auto& [key, count] : other.modes(family)) slot(family)[key] += count;
  }
  return *this;
}

double mass_squared_excess(const QuantumStringConfig& cfg, const OccupationState& occ) {
  const double s = cfg.length_ratio();
  const double t = level_scale(cfg);
  const auto weighted = [s](const OccupationState::Occupations& m) {
    double sum = 0.0;
    for (const auto& [key, count] : m) sum += (1.0 + s) * key.first * static_cast<double>(count);
    return sum;
  };
  return t * (weighted(occ.modes(OscillatorFamily::a)) +
              weighted(occ.modes(OscillatorFamily::a_tilde))) +
         2.0 * s * t * weighted(occ.modes(OscillatorFamily::c));
}

double hagedorn_beta(const QuantumStringConfig& cfg) {
  const double s = cfg.length_ratio();
  return (4.0 / s) * std::sqrt(kPiQ * (1.0 + s) / cfg.tension_two());
}

double free_energy_divergence_beta(const QuantumStringConfig& cfg) {
  const double s = cfg.length_ratio();
  return std::sqrt(8.0 * kPiQ * kPiQ * (1.0 + 4.0 * s) / (s * s * cfg.tension_two()));
}

std::string_view to_string(ConvergenceFlag flag) {
  return flag == ConvergenceFlag::converged ? "converged" : "diverged-below-hagedorn";
}

double partition24(int m) {
  if (m < 0 || m > kMaxLevel) throw DomainError("partition24: level must lie in 0..600");
  return std::exp(log_partition_table()[m]);
}

double log_eta_average_levels(double v) {
  if (!(v > 0.0)) throw DomainError("log_eta_average_levels: v must be > 0");
  return level_tail(0, 4.0 * kPiQ * v);
}

double log_eta_average_trapezoid(double v) {
  if (!(v > 0.0)) throw DomainError("log_eta_average_trapezoid: v must be > 0");
  // |eta(-u + iv)| = |eta(u + iv)|, so only u in [0, 1/2] is sampled.
  const auto sample = [v](double u) { return -48.0 * log_abs_eta({u, v}); };
  const double ref = sample(0.0);
  const double end = std::exp(sample(0.5) - ref);
  double interior = 0.0;  // sum over 0 < j < M/2 of the rescaled samples
  long points = 64;
  for (long j = 1; j < points / 2; ++j) interior += std::exp(sample(double(j) / points) - ref);
  double previous = std::log((1.0 + end + 2.0 * interior) / points);
  for (; points <= (1L << 24);) {
    const long next = 2 * points;
    for (long j = 1; j < next / 2; j += 2) interior += std::exp(sample(double(j) / next) - ref);
    points = next;
    const double current = std::log((1.0 + end + 2.0 * interior) / points);
    if (std::abs(current - previous) < 1e-9) return ref + current;
    previous = current;
  }
  throw NumericalError("tau_1 trapezoid rule did not settle", ref + previous);
}

FreeEnergyResult free_energy(const QuantumStringConfig& cfg, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("free_energy: beta must be > 0");
  const int s = cfg.length_ratio();
  const double t = level_scale(cfg);
  const Model model{s, t, beta * beta * t / (8.0 * kPiQ * kPiQ)};
  const auto g = [&model](double tau2) { return model.log_integrand(tau2); };

  FreeEnergyResult out{};
  out.constant_term = casimir_two_piece_x0(s, kPiQ).value;
  const double pref = prefactor(t);

  // Upper region [tau_top, inf): find the peak on a log grid for the rescaling.
  const double top = model.tau_top();
  double scale = kNegInf;
  for (double x = top; x < 1e8; x *= 2.0) scale = std::max(scale, g(x));
  const LogIntegral upper =
      log_integral(model, top, std::numeric_limits<double>::infinity(), scale);
  double log_partial = upper.log_value;
  double abs_err_log = upper.rel_error;  // accumulated relative error of the partial

  // Lower region: halve tau_2 until the segments settle or keep growing.
  double hi = top;
  double previous_segment = kNegInf;
  int quiet = 0;
  int growing = 0;
  bool diverged = false;
  bool settled = false;
  while (true) {
    const double lo = 0.5 * hi;
    const double seg_scale = std::max({g(lo), g(hi), g(0.75 * hi)});
    if (std::isnan(seg_scale) || seg_scale == std::numeric_limits<double>::infinity()) {
      diverged = true;
      hi = lo;
      break;
    }
    const LogIntegral seg = log_integral(model, lo, hi, seg_scale);
    const double before = log_partial;
    log_partial = log_add(log_partial, seg.log_value);
    abs_err_log += seg.rel_error;
    hi = lo;

    quiet = seg.log_value - before < std::log(kSettled) ? quiet + 1 : 0;
    growing = seg.log_value - previous_segment > std::log(kGrowth) ? growing + 1 : 0;
    previous_segment = seg.log_value;
    if (growing >= 2) {
      diverged = true;
      break;
    }
    // A quiet stretch only counts once the integrand is seen to decay towards tau_2 = 0;
    // otherwise an exponential rise may still be hiding below the current cut.
    if (quiet >= 2 && fit_kappa(model, hi) <= 0.0) {
      settled = true;
      break;
    }
    if (hi < kTau2Floor) break;
  }
  out.tau2_min = hi;
  out.divergence_rate = fit_kappa(model, hi);

  if (!diverged && !settled) {
    if (out.divergence_rate > 0.0) {
      diverged = true;
    } else {
      std::ostringstream msg;
      msg << "free energy: small-tau_2 end neither settled nor diverged down to tau_2 = " << hi
          << " (fitted rate " << out.divergence_rate << ")";
      throw NumericalError(msg.str(), out.constant_term - pref * std::exp(log_partial));
    }
  }

  if (diverged) {
    out.flag = ConvergenceFlag::diverged_below_hagedorn;
    out.integral = std::numeric_limits<double>::infinity();
    out.free_energy = std::numeric_limits<double>::quiet_NaN();
    out.abs_error_estimate = std::numeric_limits<double>::infinity();
    return out;
  }
  out.flag = ConvergenceFlag::converged;
  out.integral = std::exp(log_partial);
  out.free_energy = out.constant_term - pref * out.integral;
  // The dropped piece below tau2_min is bounded by the last (settled) segment.
  out.abs_error_estimate =
      pref * out.integral * (abs_err_log + std::exp(previous_segment - log_partial)) +
      4.0 * std::numeric_limits<double>::epsilon() * std::abs(out.free_energy);
  return out;
}

ThermoResult thermo_derivatives(const QuantumStringConfig& cfg, double beta) {
  const double beta_c = hagedorn_beta(cfg);
  if (!(beta > 1.1 * beta_c)) {
    throw DomainError("thermo_derivatives: need beta > 1.1 beta_c = " + std::to_string(1.1 * beta_c));
  }
  const double h = 1e-3 * beta;
  // Differentiate the integral alone; the constant term would swamp the differences.
  const auto integral_at = [&cfg](double b) {
    const FreeEnergyResult r = free_energy(cfg, b);
    if (r.flag != ConvergenceFlag::converged) {
      throw NumericalError("thermo_derivatives: free energy diverges at beta = " + std::to_string(b));
    }
    return r;
  };
  const FreeEnergyResult centre = integral_at(beta);
  std::array<double, 4> i_vals{};
  const std::array<double, 4> offsets{-2.0 * h, -h, h, 2.0 * h};
  for (std::size_t k = 0; k < 4; ++k) i_vals[k] = integral_at(beta + offsets[k]).integral;

  const auto richardson = [h](const std::array<double, 4>& y) {
    const double d1 = (y[2] - y[1]) / (2.0 * h);
    const double d2 = (y[3] - y[0]) / (4.0 * h);
    return (4.0 * d1 - d2) / 3.0;
  };
  std::array<double, 4> bi_vals{};
  for (std::size_t k = 0; k < 4; ++k) bi_vals[k] = (beta + offsets[k]) * i_vals[k];

  const double pref = prefactor(level_scale(cfg));
  const double di = richardson(i_vals);
  const double dbi = richardson(bi_vals);

  ThermoResult out{};
  out.beta = beta;
  out.flag = ConvergenceFlag::converged;
  out.free_energy = centre.free_energy;
  out.internal_energy = centre.constant_term - pref * dbi;
  out.entropy = -beta * beta * pref * di;
  // Formed from the integral parts so the constant term cannot mask the discrepancy.
  out.identity_residual = pref * std::abs(centre.integral - dbi + beta * di);
  return out;
}

}  // namespace pwstring
