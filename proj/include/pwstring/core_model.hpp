#pragma once

// Geometry and material parameters of the piecewise uniform closed string,
// the dispersion functions whose zeros are its eigenfrequencies, and the
// 2x2 transfer-matrix algebra of the 2N-piece string.
//
// Units: c = 1 (transverse sound speed equals the speed of light on every
// piece), lengths dimensionless, k_B = 1.

#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace pwstring {

inline constexpr double kPi = std::numbers::pi;

/// Two-piece string: total length L, length ratio s = L_II / L_I and tension
/// ratio x = T_I / T_II. The tension ratio is kept in [0, 1]; x > 1 maps
/// losslessly to 1/x (see canonical_tension_ratio). x = 0 is accepted as an
/// exact input: the dispersion relation is regular there.
class StringConfig {
 public:
  StringConfig(double length_ratio, double tension_ratio, double total_length = kPi);

  double total_length() const noexcept { return total_length_; }
  double length_ratio() const noexcept { return length_ratio_; }
  double tension_ratio() const noexcept { return tension_ratio_; }

  /// L_I = L / (1 + s).
  double length_one() const noexcept { return total_length_ - length_two(); }
  /// L_II = s L / (1 + s).
  double length_two() const noexcept {
    return total_length_ * length_ratio_ / (1.0 + length_ratio_);
  }

  /// alpha = (1 - x) / (1 + x).
  double alpha() const noexcept;

 private:
  double length_ratio_;
  double tension_ratio_;
  double total_length_;
};

/// 2N-piece string: 2N pieces of equal length L / 2N, alternating type I and
/// type II material.
class NPieceConfig {
 public:
  NPieceConfig(int piece_pairs, double tension_ratio, double total_length = kPi);

  int piece_pairs() const noexcept { return piece_pairs_; }
  double tension_ratio() const noexcept { return tension_ratio_; }
  double total_length() const noexcept { return total_length_; }
  double alpha() const noexcept;

 private:
  int piece_pairs_;
  double tension_ratio_;
  double total_length_;
};

/// Maps any positive tension ratio onto (0, 1]; the dispersion relation is
/// invariant under x -> 1/x.
double canonical_tension_ratio(double x);

/// F(x) = 4x / (1 - x)^2. Throws DomainError for x <= 0 and at the pole x = 1.
double tension_contrast(double x);

/// alpha(x) = (1 - x) / (1 + x) for x in [0, 1].
double alpha_param(double x);

/// Two-piece dispersion function
///   g(w) = [F sin^2(w L / 2) + sin(w L_I) sin(w L_II)] / (F + 1),
/// evaluated in the equivalent form (1 - a^2) sin^2(w L / 2) + a^2 sin(w L_I) sin(w L_II)
/// which stays finite at x = 1. Entire and even in w.
std::complex<double> dispersion_two_piece(std::complex<double> omega, const StringConfig& cfg);

/// dg/dw for real w.
double dispersion_two_piece_derivative(double omega, const StringConfig& cfg);

/// The 2x2 matrix Lambda(alpha, p) = [[a, b], [b~, a~]] with a = e^{-ip} - alpha^2 and
/// b = alpha (e^{-ip} - 1). For real p the lower row is the complex conjugate
/// of the upper one; for complex p it is the analytic continuation
/// a~ = e^{ip} - alpha^2, b~ = alpha (e^{ip} - 1).
class TransferMatrix {
 public:
  explicit TransferMatrix(const Eigen::Matrix2cd& m) : m_(m) {}

  std::complex<double> a() const { return m_(0, 0); }
  std::complex<double> b() const { return m_(0, 1); }
  std::complex<double> determinant() const { return m_.determinant(); }
  const Eigen::Matrix2cd& matrix() const noexcept { return m_; }

 private:
  Eigen::Matrix2cd m_;
};

TransferMatrix transfer_matrix(double alpha, std::complex<double> p);

/// Eigenvalues of Lambda at imaginary argument p = iq.
struct EigenPair {
  double lambda_plus;
  double lambda_minus;
};

/// lambda_pm = cosh q - alpha^2 +- sqrt((cosh q - alpha^2)^2 - (1 - alpha^2)^2).
EigenPair lambda_pair(double alpha, double q);

/// How Lambda^N is formed.
enum class PowerMethod {
  spectral,   ///< lambda_pm^N assembled through the 2x2 Cayley-Hamilton form
  recursive,  ///< N explicit matrix products; slow, kept as an exact cross-check
};

/// M_2N(x, p) = [(1 + x)^2 / 4x]^N Lambda^N(alpha, p). Requires x > 0.
Eigen::Matrix2cd system_matrix(const NPieceConfig& cfg, std::complex<double> p,
                               PowerMethod method = PowerMethod::spectral);

/// det(M_2N - 1); its zeros in p = w L / N are the 2N-piece eigenfrequencies.
std::complex<double> system_determinant(const NPieceConfig& cfg, std::complex<double> p,
                                        PowerMethod method = PowerMethod::spectral);

/// D_N(q) = 2 (1 - alpha^2)^N - [lambda_+^N(iq) + lambda_-^N(iq)], the imaginary-axis
/// dispersion function of the 2N-piece string. Overflows to -inf for very large N q;
/// the energy integrands use log_ratio_2n instead.
double dispersion_2n(double q, const NPieceConfig& cfg);

/// D_N on the real frequency axis, p = w L / N real:
/// 2 (1 - alpha^2)^N - tr Lambda^N(alpha, p).
double dispersion_2n_real(double omega, const NPieceConfig& cfg);

/// ln | D_N(q) / (4 sinh^2(N q / 2)) |, assembled in log space. Finite for q > 0;
/// at q = 0 returns the limit (N - 1) ln(1 - alpha^2), which is -inf at x = 0, N >= 2.
double log_ratio_2n(double q, const NPieceConfig& cfg);

/// sinh(a xi) sinh(b xi) / sinh^2((a + b) xi / 2) for a, b > 0, xi >= 0, with the xi -> 0
/// limit 4ab / (a + b)^2.
double sinh_ratio(double xi, double a, double b);

/// ln | (F + sinh(xi L_I) sinh(xi L_II) / sinh^2(xi L / 2)) / (F + 1) |, the two-piece
/// imaginary-axis log ratio, finite for all xi >= 0 and all x in [0, 1].
double log_ratio_two_piece(double xi, const StringConfig& cfg);

/// ln sinh(z) for z > 0, accurate for large z.
double log_sinh(double z);

}  // namespace pwstring
