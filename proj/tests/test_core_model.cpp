#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "pwstring/core_model.hpp"
#include "pwstring/errors.hpp"

using namespace pwstring;
using cd = std::complex<double>;

namespace {

// Dispersion function written directly in terms of F(x) = 4x / (1 - x)^2.
cd dispersion_by_contrast(cd omega, double s, double x, double length) {
  const double f = 4.0 * x / ((1.0 - x) * (1.0 - x));
  const double l1 = length / (1.0 + s);
  const cd half = std::sin((s + 1.0) * omega * l1 / 2.0);
  return (f * half * half + std::sin(omega * l1) * std::sin(s * omega * l1)) / (f + 1.0);
}

// 2 (1 - alpha^2)^N - tr Lambda^N from N explicit products of Lambda at p = i q.
double dispersion_by_products(double q, int n, double x) {
  const double a = (1.0 - x) / (1.0 + x);
  Eigen::Matrix2d lam;
  lam << std::exp(q) - a * a, a * (std::exp(q) - 1.0), a * (std::exp(-q) - 1.0),
      std::exp(-q) - a * a;
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (int j = 0; j < n; ++j) m = m * lam;
  return 2.0 * std::pow(1.0 - a * a, n) - m.trace();
}

}  // namespace

TEST_CASE("configurations reject invalid parameters") {
  CHECK_THROWS_AS(StringConfig(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(StringConfig(-1.0, 0.5), DomainError);
  CHECK_THROWS_AS(StringConfig(2.0, 1.5), DomainError);
  CHECK_THROWS_AS(StringConfig(2.0, -0.1), DomainError);
  CHECK_THROWS_AS(StringConfig(2.0, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(NPieceConfig(0, 0.5), DomainError);
  CHECK_NOTHROW(StringConfig(2.0, 0.0));
  CHECK_NOTHROW(StringConfig(2.0, 1.0));
}

TEST_CASE("piece lengths add up to the total") {
  for (double s : {0.1, 0.5, 1.0, 2.0, 3.7, 10.0}) {
    const StringConfig cfg(s, 0.3, 2.0);
    CHECK(cfg.length_one() + cfg.length_two() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cfg.length_two() / cfg.length_one() == doctest::Approx(s).epsilon(1e-14));
  }
}

TEST_CASE("tension contrast") {
  CHECK(tension_contrast(0.5) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(tension_contrast(1.0 / 3.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(tension_contrast(1.0), DomainError);
  CHECK_THROWS_AS(tension_contrast(0.0), DomainError);
  CHECK_THROWS_AS(tension_contrast(-0.2), DomainError);
  double previous = 0.0;
  for (double x = 0.05; x < 1.0; x += 0.05) {
    const double f = tension_contrast(x);
    CHECK(f > previous);
    previous = f;
    const double inv = 1.0 / x;
    CHECK(4.0 * inv / ((1.0 - inv) * (1.0 - inv)) == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("alpha parameter") {
  CHECK(alpha_param(1.0) == 0.0);
  CHECK(alpha_param(0.0) == 1.0);
  CHECK(alpha_param(1.0 / 3.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double x = 0.0; x <= 1.0; x += 0.125) {
    const double a = alpha_param(x);
    CHECK(std::abs((1.0 - a * a) - 4.0 * x / ((1.0 + x) * (1.0 + x))) < 4e-16);
  }
}

TEST_CASE("two-piece dispersion function") {
  SUBCASE("vanishes at the origin") {
    for (double s : {0.5, 2.0, 3.0}) {
      for (double x : {0.0, 0.3, 1.0}) {
        CHECK(std::abs(dispersion_two_piece(0.0, StringConfig(s, x))) == 0.0);
      }
    }
  }
  SUBCASE("s = 1, x = 0 reduces to sin^2(pi omega / 2)") {
    const StringConfig cfg(1.0, 0.0);
    for (double w = 0.1; w < 6.0; w += 0.37) {
      const double expect = std::pow(std::sin(w * kPi / 2.0), 2);
      CHECK(std::abs(dispersion_two_piece(w, cfg) - expect) < 1e-14);
    }
    for (int n = 1; n <= 3; ++n) CHECK(std::abs(dispersion_two_piece(2.0 * n, cfg)) < 1e-14);
  }
  SUBCASE("s = 2, x = 0: first-branch zero at 3 and second-branch zero at 3/2") {
    const StringConfig cfg(2.0, 0.0);
    CHECK(std::abs(dispersion_two_piece(3.0, cfg)) < 1e-14);
    CHECK(std::abs(dispersion_two_piece(1.5, cfg)) < 1e-14);
    // no zero below 3/2
    for (double w = 0.05; w < 1.45; w += 0.05) CHECK(std::abs(dispersion_two_piece(w, cfg)) > 1e-3);
  }
  SUBCASE("agrees with the F(x) form for complex frequencies") {
    for (double s : {0.4, 1.0, 2.0, 3.5}) {
      for (double x : {0.05, 0.3, 0.8}) {
        const StringConfig cfg(s, x, 2.5);
        for (cd w : {cd(0.7, 0.0), cd(2.3, 0.4), cd(5.1, -0.2), cd(0.0, 1.3)}) {
          const cd a = dispersion_two_piece(w, cfg);
          const cd b = dispersion_by_contrast(w, s, x, 2.5);
          CHECK(std::abs(a - b) < 1e-13 * (1.0 + std::abs(b)));
        }
      }
    }
  }
  SUBCASE("even in omega and symmetric under s -> 1/s") {
    for (double s : {0.3, 2.0, 4.5}) {
      const StringConfig cfg(s, 0.2);
      const StringConfig mirror(1.0 / s, 0.2);
      for (double w = 0.1; w < 8.0; w += 0.77) {
        CHECK(std::abs(dispersion_two_piece(w, cfg) - dispersion_two_piece(-w, cfg)) < 1e-15);
        CHECK(std::abs(dispersion_two_piece(w, cfg) - dispersion_two_piece(w, mirror)) < 1e-13);
      }
    }
  }
  SUBCASE("derivative matches a central difference") {
    const StringConfig cfg(2.5, 0.4);
    for (double w = 0.3; w < 5.0; w += 0.9) {
      const double h = 1e-6;
      const double fd = (dispersion_two_piece(w + h, cfg) - dispersion_two_piece(w - h, cfg)).real() / (2 * h);
      CHECK(dispersion_two_piece_derivative(w, cfg) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("transfer matrix") {
  const TransferMatrix id = transfer_matrix(0.0, 0.0);
  CHECK(std::abs(id.a() - 1.0) < 1e-15);
  CHECK(std::abs(id.b()) < 1e-15);
  const TransferMatrix m = transfer_matrix(0.5, kPi);
  CHECK(std::abs(m.a() - cd(-1.25, 0.0)) < 1e-15);
  CHECK(std::abs(m.b() - cd(-1.0, 0.0)) < 1e-15);
  for (double a : {0.0, 0.25, 0.5, 0.9}) {
    for (double p = -3.0; p <= 3.0; p += 0.4) {
      const TransferMatrix t = transfer_matrix(a, p);
      const double k = 1.0 - a * a;
      CHECK(std::abs(t.determinant() - k * k) < 1e-12);
      // real p: [[a, b], [b*, a*]]
      CHECK(std::abs(t.matrix()(1, 0) - std::conj(t.b())) < 1e-15);
      CHECK(std::abs(t.matrix()(1, 1) - std::conj(t.a())) < 1e-15);
      CHECK(std::abs(std::norm(t.a()) - std::norm(t.b()) - k * k) < 1e-12);
    }
  }
  CHECK_THROWS_AS(transfer_matrix(1.0, 0.3), DomainError);
}

TEST_CASE("eigenvalue pair") {
  for (double a : {0.0, 0.3, 0.5, 0.99}) {
    const EigenPair z = lambda_pair(a, 0.0);
    CHECK(z.lambda_plus == doctest::Approx(1.0 - a * a).epsilon(1e-15));
    CHECK(z.lambda_minus == doctest::Approx(1.0 - a * a).epsilon(1e-15));
  }
  for (double q : {0.1, 1.0, 5.0}) {
    const EigenPair u = lambda_pair(0.0, q);
    CHECK(u.lambda_plus == doctest::Approx(std::exp(q)).epsilon(1e-14));
    CHECK(u.lambda_minus == doctest::Approx(std::exp(-q)).epsilon(1e-14));
  }
  const EigenPair half = lambda_pair(0.5, 1.0);
  const double mu = std::cosh(1.0) - 0.25;
  CHECK(half.lambda_plus == doctest::Approx(mu + std::sqrt(mu * mu - 0.5625)).epsilon(1e-14));
  CHECK(half.lambda_plus * half.lambda_minus == doctest::Approx(0.5625).epsilon(1e-14));
  CHECK(half.lambda_plus >= half.lambda_minus);
  CHECK(half.lambda_minus > 0.0);
}

TEST_CASE("2N dispersion numerator") {
  for (int n = 1; n <= 6; ++n) {
    CHECK(std::abs(dispersion_2n(0.0, NPieceConfig(n, 0.4))) < 1e-14);
    for (double q : {0.2, 1.0, 2.5}) {
      CHECK(dispersion_2n(q, NPieceConfig(n, 1.0)) ==
            doctest::Approx(2.0 - 2.0 * std::cosh(n * q)).epsilon(1e-13));
    }
  }
  CHECK(dispersion_2n(0.5, NPieceConfig(2, 0.1)) ==
        doctest::Approx(dispersion_by_products(0.5, 2, 0.1)).epsilon(1e-10));
  for (int n : {3, 5, 8}) {
    for (double x : {0.1, 0.5, 0.9}) {
      for (double q : {0.05, 0.7, 2.0}) {
        const double v = dispersion_2n(q, NPieceConfig(n, x));
        CHECK(v == doctest::Approx(dispersion_by_products(q, n, x)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("2N dispersion numerator is negative off the origin") {
  for (int n = 1; n <= 8; ++n) {
    for (double x : {0.1, 0.5, 0.9}) {
      const NPieceConfig cfg(n, x);
      for (double q = 0.01; q < 6.0; q *= 1.5) CHECK(dispersion_2n(q, cfg) < 0.0);
    }
  }
}

TEST_CASE("system matrix: spectral power against explicit products, unit determinant") {
  for (int n = 1; n <= 10; ++n) {
    for (double x : {0.05, 0.3, 0.7, 1.0}) {
      const NPieceConfig cfg(n, x);
      for (cd p : {cd(0.3, 0.0), cd(1.7, 0.0), cd(2.9, 0.0), cd(0.0, 0.6), cd(1.1, 0.2)}) {
        const Eigen::Matrix2cd fast = system_matrix(cfg, p, PowerMethod::spectral);
        const Eigen::Matrix2cd slow = system_matrix(cfg, p, PowerMethod::recursive);
        CHECK((fast - slow).norm() < 1e-9 * (1.0 + slow.norm()));
        // entries of size |M| carry rounding of order eps |M|, so ad - bc does too
        const double scale = std::max(1.0, fast.squaredNorm());
        CHECK(std::abs(fast.determinant() - 1.0) < 1e-14 * scale);
      }
    }
  }
  CHECK_THROWS_AS(system_matrix(NPieceConfig(2, 0.0), 0.5), DomainError);
}

TEST_CASE("real-axis 2N dispersion vanishes where det(M - 1) does") {
  // uniform string, N = 2, L = pi: roots at omega = 2 n
  const NPieceConfig uniform(2, 1.0);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(dispersion_2n_real(2.0 * n, uniform)) < 1e-12);
  const NPieceConfig cfg(3, 0.4);
  for (double w = 0.3; w < 4.0; w += 0.45) {
    const double p = w * kPi / 3.0;
    const cd det = system_determinant(cfg, p);
    const double k = 1.0 - cfg.alpha() * cfg.alpha();
    CHECK(dispersion_2n_real(w, cfg) == doctest::Approx((std::pow(k, 3) * det).real()).epsilon(1e-9));
  }
}

TEST_CASE("log ratios are finite and match their closed-form limits") {
  const StringConfig cfg(3.0, 0.2);
  const double a2 = cfg.alpha() * cfg.alpha();
  const double f = tension_contrast(0.2);
  const double at_zero = std::log((f + 4.0 * 3.0 / 16.0) / (f + 1.0));
  CHECK(log_ratio_two_piece(0.0, cfg) == doctest::Approx(at_zero).epsilon(1e-13));
  CHECK(log_ratio_two_piece(1e-12, cfg) == doctest::Approx(at_zero).epsilon(1e-9));
  (void)a2;
  for (int n = 2; n <= 8; ++n) {
    for (double x : {0.0, 0.2, 0.7}) {
      const NPieceConfig c(n, x);
      for (double q : {1e-3, 0.4, 3.0, 40.0, 400.0}) {
        const double v = log_ratio_2n(q, c);
        CHECK(std::isfinite(v));
        CHECK(v <= 0.0);
      }
      if (x > 0.0) {
        const double k = 1.0 - c.alpha() * c.alpha();
        CHECK(log_ratio_2n(0.0, c) == doctest::Approx((n - 1) * std::log(k)).epsilon(1e-14));
        CHECK(log_ratio_2n(1e-7, c) == doctest::Approx((n - 1) * std::log(k)).epsilon(1e-6));
      }
      // direct evaluation where nothing cancels
      const double q = 2.0;
      const EigenPair lp = c.alpha() < 1.0 ? lambda_pair(c.alpha(), q) : EigenPair{2.0 * (std::cosh(q) - 1.0), 0.0};
      const double k = 1.0 - c.alpha() * c.alpha();
      const double direct = std::log(std::abs(
          (2.0 * std::pow(k, n) - std::pow(lp.lambda_plus, n) - std::pow(lp.lambda_minus, n)) /
          (4.0 * std::pow(std::sinh(n * q / 2.0), 2))));
      CHECK(log_ratio_2n(q, c) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}
