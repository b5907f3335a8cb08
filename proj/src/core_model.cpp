#include "pwstring/core_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "pwstring/errors.hpp"

namespace pwstring {

namespace {

using cd = std::complex<double>;

void require_tension_ratio(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("tension ratio must lie in [0, 1] (map x > 1 to 1/x first), got " +
                      std::to_string(x));
  }
}

void require_length(double length) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("total length must be positive and finite, got " + std::to_string(length));
  }
}

// sinh(a xi) sinh(b xi) / sinh^2((a + b) xi / 2) - 1
//   = -[e^{-a xi} - e^{-b xi}]^2 / [1 - e^{-(a + b) xi}]^2,
// exact to rounding for every xi >= 0 (the tail is not a difference of near-equal numbers).
double sinh_ratio_minus_one(double xi, double a, double b) {
  const double total = a + b;
  if (xi * total < 1e-9) {
    const double d = (b - a) / total;
    return -d * d;
  }
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double num = std::exp(-lo * xi) * std::expm1(-(hi - lo) * xi);
  const double den = std::expm1(-total * xi);
  const double r = num / den;
  return -r * r;
}

}  // namespace

StringConfig::StringConfig(double length_ratio, double tension_ratio, double total_length)
    : length_ratio_(length_ratio), tension_ratio_(tension_ratio), total_length_(total_length) {
  if (!(length_ratio > 0.0) || !std::isfinite(length_ratio)) {
    throw DomainError("length ratio s must be positive and finite, got " +
                      std::to_string(length_ratio));
  }
  require_tension_ratio(tension_ratio);
  require_length(total_length);
}

double StringConfig::alpha() const noexcept {
  return (1.0 - tension_ratio_) / (1.0 + tension_ratio_);
}

NPieceConfig::NPieceConfig(int piece_pairs, double tension_ratio, double total_length)
    : piece_pairs_(piece_pairs), tension_ratio_(tension_ratio), total_length_(total_length) {
  if (piece_pairs < 1) {
    throw DomainError("piece_pairs N must be >= 1, got " + std::to_string(piece_pairs));
  }
  require_tension_ratio(tension_ratio);
  require_length(total_length);
}

double NPieceConfig::alpha() const noexcept {
  return (1.0 - tension_ratio_) / (1.0 + tension_ratio_);
}

double canonical_tension_ratio(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("tension ratio must be positive and finite, got " + std::to_string(x));
  }
  return x > 1.0 ? 1.0 / x : x;
}

double tension_contrast(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("tension_contrast: x must be positive, got " + std::to_string(x));
  }
  if (x == 1.0) {
    throw DomainError("uniform string: F diverges at x = 1");
  }
  const double d = 1.0 - x;
  return 4.0 * x / (d * d);
}

double alpha_param(double x) {
  require_tension_ratio(x);
  return (1.0 - x) / (1.0 + x);
}

std::complex<double> dispersion_two_piece(std::complex<double> omega, const StringConfig& cfg) {
  const double a = cfg.alpha();
  const double a2 = a * a;
  const cd half = std::sin(omega * (0.5 * cfg.total_length()));
  return (1.0 - a2) * half * half +
         a2 * std::sin(omega * cfg.length_one()) * std::sin(omega * cfg.length_two());
}

double dispersion_two_piece_derivative(double omega, const StringConfig& cfg) {
  const double a = cfg.alpha();
  const double a2 = a * a;
  const double l = cfg.total_length();
  const double l1 = cfg.length_one();
  const double l2 = cfg.length_two();
  return (1.0 - a2) * 0.5 * l * std::sin(omega * l) +
         a2 * (l1 * std::cos(omega * l1) * std::sin(omega * l2) +
               l2 * std::sin(omega * l1) * std::cos(omega * l2));
}

TransferMatrix transfer_matrix(double alpha, std::complex<double> p) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError("transfer_matrix: alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
  const cd i(0.0, 1.0);
  const cd em = std::exp(-i * p);
  const cd ep = std::exp(i * p);
  const double a2 = alpha * alpha;
  Eigen::Matrix2cd m;
  m << em - a2, alpha * (em - 1.0),
       alpha * (ep - 1.0), ep - a2;
  return TransferMatrix(m);
}

EigenPair lambda_pair(double alpha, double q) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError("lambda_pair: alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
  if (!(q >= 0.0)) {
    throw DomainError("lambda_pair: q must be >= 0, got " + std::to_string(q));
  }
  const double a2 = alpha * alpha;
  const double k = 1.0 - a2;
  const double mu = std::cosh(q) - a2;
  // mu^2 - k^2 = (cosh q - 1)(cosh q + 1 - 2 alpha^2), with cosh q - 1 = 2 sinh^2(q/2).
  const double sh = std::sinh(0.5 * q);
  const double disc = 2.0 * sh * sh * (mu + k);
  const double plus = mu + std::sqrt(disc);
  return {plus, k * k / plus};
}

namespace {

// Lambda^N = A_N Lambda - det(Lambda) A_{N-1} 1, with A_n = (l1^n - l2^n) / (l1 - l2).
Eigen::Matrix2cd spectral_power(const Eigen::Matrix2cd& lam, int n) {
  const cd tr = lam.trace();
  const cd det = lam.determinant();
  const cd root = std::sqrt(tr * tr - 4.0 * det);
  const cd l1 = 0.5 * (tr + root);
  const cd l2 = 0.5 * (tr - root);
  cd a_n;
  cd a_prev;
  if (std::abs(l1 - l2) > 1e-6 * std::max(std::abs(l1), std::abs(l2))) {
    a_n = (std::pow(l1, n) - std::pow(l2, n)) / (l1 - l2);
    a_prev = (std::pow(l1, n - 1) - std::pow(l2, n - 1)) / (l1 - l2);
  } else {
    // nearly degenerate pair: the divided differences by their scalar recurrence
    a_prev = 0.0;
    a_n = 1.0;
    for (int j = 1; j < n; ++j) {
      const cd next = tr * a_n - det * a_prev;
      a_prev = a_n;
      a_n = next;
    }
  }
  return a_n * lam - det * a_prev * Eigen::Matrix2cd::Identity();
}

Eigen::Matrix2cd recursive_power(const Eigen::Matrix2cd& lam, int n) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Identity();
  for (int j = 0; j < n; ++j) out = out * lam;
  return out;
}

}  // namespace

Eigen::Matrix2cd system_matrix(const NPieceConfig& cfg, std::complex<double> p,
                               PowerMethod method) {
  const double x = cfg.tension_ratio();
  if (!(x > 0.0)) {
    throw DomainError("system_matrix: prefactor (1 + x)^2 / 4x diverges at x = 0");
  }
  const int n = cfg.piece_pairs();
  const Eigen::Matrix2cd lam = transfer_matrix(cfg.alpha(), p).matrix();
  const Eigen::Matrix2cd power =
      method == PowerMethod::spectral ? spectral_power(lam, n) : recursive_power(lam, n);
  const double scale = std::pow((1.0 + x) * (1.0 + x) / (4.0 * x), n);
  return scale * power;
}

std::complex<double> system_determinant(const NPieceConfig& cfg, std::complex<double> p,
                                        PowerMethod method) {
  const Eigen::Matrix2cd m = system_matrix(cfg, p, method);
  return m.determinant() - m.trace() + 1.0;
}

double dispersion_2n(double q, const NPieceConfig& cfg) {
  const double a = cfg.alpha();
  const int n = cfg.piece_pairs();
  const double k = 1.0 - a * a;
  if (a == 1.0) {
    // lambda_+ = 2 (cosh q - 1), lambda_- = 0
    return -std::pow(2.0 * (std::cosh(q) - 1.0), n);
  }
  const EigenPair lp = lambda_pair(a, q);
  return 2.0 * std::pow(k, n) - (std::pow(lp.lambda_plus, n) + std::pow(lp.lambda_minus, n));
}

double dispersion_2n_real(double omega, const NPieceConfig& cfg) {
  const double a = cfg.alpha();
  const int n = cfg.piece_pairs();
  const double k = 1.0 - a * a;
  const double p = omega * cfg.total_length() / n;
  const cd mu = std::cos(p) - a * a;
  const cd root = std::sqrt(mu * mu - k * k);
  const cd trace = std::pow(mu + root, n) + std::pow(mu - root, n);
  return 2.0 * std::pow(k, n) - trace.real();
}

double log_sinh(double z) {
  if (z > 20.0) return z - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * z));
  return std::log(std::sinh(z));
}

double log_ratio_2n(double q, const NPieceConfig& cfg) {
  const double a = cfg.alpha();
  const int n = cfg.piece_pairs();
  if (n == 1 || a == 0.0) return 0.0;
  const double k = 1.0 - a * a;
  if (q == 0.0) {
    return k > 0.0 ? (n - 1) * std::log(k) : -std::numeric_limits<double>::infinity();
  }
  if (q >= 1.0) {
    // With lambda_pm = k e^{+-theta}, write e^theta = e^{q} R / k; then
    //   ln ratio = N ln R + 2 ln(1 - e^{-N theta}) - 2 ln(1 - e^{-N q}),
    // free of the O(N q) cancellation between numerator and denominator.
    const double e = std::exp(-q);
    const double root = std::sqrt((1.0 + e) * (1.0 + e) - 4.0 * a * a * e);
    const double r_minus_one = 0.5 * (e * e - 2.0 * a * a * e - 1.0 + (1.0 - e) * root);
    const double log_r = std::log1p(r_minus_one);
    const double numerator_edge =
        k == 0.0 ? 0.0 : std::log(-std::expm1(-n * (q + log_r - std::log(k))));
    return n * log_r + 2.0 * numerator_edge - 2.0 * std::log(-std::expm1(-n * q));
  }
  const double half_n_q = 0.5 * n * q;
  if (k == 0.0) {
    // (2 sinh(q/2))^{2N} / (2 sinh(N q / 2))^2
    return 2.0 * n * (std::numbers::ln2 + log_sinh(0.5 * q)) -
           2.0 * (std::numbers::ln2 + log_sinh(half_n_q));
  }
  // Below this the O(q^2) correction to the limit is far under double precision.
  if (q < 1e-150) return (n - 1) * std::log(k);
  // lambda_pm = k e^{+-theta} with sinh(theta / 2) = sinh(q / 2) / sqrt(k), so the ratio is
  // k^N sinh^2(N theta / 2) / sinh^2(N q / 2).
  const double theta = 2.0 * std::asinh(std::sinh(0.5 * q) / std::sqrt(k));
  return n * std::log(k) + 2.0 * log_sinh(0.5 * n * theta) - 2.0 * log_sinh(half_n_q);
}

double sinh_ratio(double xi, double a, double b) {
  return 1.0 + sinh_ratio_minus_one(xi, a, b);
}

double log_ratio_two_piece(double xi, const StringConfig& cfg) {
  const double a = cfg.alpha();
  if (a == 0.0) return 0.0;
  const double rm1 = sinh_ratio_minus_one(xi, cfg.length_one(), cfg.length_two());
  return std::log1p(a * a * rm1);
}

}  // namespace pwstring
