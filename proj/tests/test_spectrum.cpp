#include <doctest.h>

#include <cmath>
#include <random>

#include "pwstring/core_model.hpp"
#include "pwstring/errors.hpp"
#include "pwstring/spectrum.hpp"

using namespace pwstring;

namespace {

void check_lines(const Spectrum& spec, std::initializer_list<std::pair<double, int>> expected) {
  REQUIRE(spec.entries.size() == expected.size());
  std::size_t i = 0;
  for (const auto& [omega, mult] : expected) {
    CHECK(spec.entries[i].omega == doctest::Approx(omega).epsilon(1e-10));
    CHECK(spec.entries[i].multiplicity == mult);
    ++i;
  }
}

}  // namespace

TEST_CASE("uniform string spectrum") {
  const Spectrum spec = find_spectrum(StringConfig(1.7, 1.0, 2.0 * kPi), 3.5);
  check_lines(spec, {{1.0, 2}, {2.0, 2}, {3.0, 2}});
  check_lines(uniform_spectrum(2.0 * kPi, 3.5), {{1.0, 2}, {2.0, 2}, {3.0, 2}});
  CHECK(count_modes(StringConfig(1.7, 1.0, 2.0 * kPi), 3.5).zeros_minus_poles == 6);
}

TEST_CASE("s = 1 collapses to a doubly degenerate ladder") {
  check_lines(find_spectrum(StringConfig(1.0, 0.5), 2.5), {{2.0, 2}});
}

TEST_CASE("x = 0, s = 2 merges both branches") {
  const StringConfig cfg(2.0, 0.0);
  const Spectrum spec = find_spectrum(cfg, 10.0);
  // first branch 3, 6, 9 and second branch 1.5 n; coincident points carry both
  check_lines(spec, {{1.5, 1}, {3.0, 2}, {4.5, 1}, {6.0, 2}, {7.5, 1}, {9.0, 2}});
  for (const SpectralLine& line : spec.entries) {
    const bool both = std::abs(std::remainder(line.omega, 3.0)) < 1e-9;
    CHECK(line.branch_coincidence == both);
  }
  CHECK(count_modes(cfg, 10.0).zeros_minus_poles == spec.total_multiplicity());
}

TEST_CASE("empty contour below the first root") {
  CHECK(count_modes(StringConfig(2.0, 0.0), 1.0).zeros_minus_poles == 0);
  CHECK(count_modes(StringConfig(3.0, 0.4), 0.2).zeros_minus_poles == 0);
  CHECK(find_spectrum(StringConfig(3.0, 0.4), 0.2).entries.empty());
}

TEST_CASE("entries are strictly increasing and bounded by omega_max") {
  const Spectrum spec = find_spectrum(StringConfig(2.5, 0.3), 30.0);
  REQUIRE_FALSE(spec.entries.empty());
  for (std::size_t i = 1; i < spec.entries.size(); ++i) {
    CHECK(spec.entries[i].omega > spec.entries[i - 1].omega);
  }
  CHECK(spec.entries.back().omega <= 30.0);
  for (const SpectralLine& line : spec.entries) {
    CHECK(line.multiplicity >= 1);
    CHECK(std::abs(dispersion_two_piece(line.omega, StringConfig(2.5, 0.3))) < 1e-9);
  }
}

TEST_CASE("contour count equals multiplicity sum on a 20-point grid") {
  const double ss[] = {0.5, 1.0, 2.0, 3.0, 4.5};
  const double xs[] = {0.0, 0.1, 0.5, 0.9};
  for (double s : ss) {
    for (double x : xs) {
      const StringConfig cfg(s, x);
      const double omega_max = 12.3;
      CAPTURE(s);
      CAPTURE(x);
      CHECK(count_modes(cfg, omega_max).zeros_minus_poles ==
            find_spectrum(cfg, omega_max).total_multiplicity());
    }
  }
}

TEST_CASE("count_modes shifts a contour edge that lands on a root") {
  const StringConfig cfg(1.0, 0.5);
  CHECK(count_modes(cfg, 4.0).zeros_minus_poles == find_spectrum(cfg, 4.0).total_multiplicity());
}

TEST_CASE("no roots off the real axis") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> s_dist(0.2, 5.0);
  std::uniform_real_distribution<double> x_dist(0.0, 0.99);
  for (int k = 0; k < 5; ++k) {
    const StringConfig cfg(s_dist(rng), x_dist(rng));
    const auto g = [&cfg](std::complex<double> w) { return dispersion_two_piece(w, cfg); };
    CHECK(winding_count(g, Rectangle{0.3, 9.7, 0.5}, 0.05).zeros_minus_poles ==
          winding_count(g, Rectangle{0.3, 9.7, 0.05}, 0.01).zeros_minus_poles);
    CHECK(winding_count(g, Rectangle{0.3, 9.7, 0.5}, 0.05).zeros_minus_poles -
              winding_count(g, Rectangle{0.3, 9.7, 0.25}, 0.05).zeros_minus_poles ==
          0);
  }
}

TEST_CASE("spectrum is invariant under s -> 1/s") {
  for (double s : {2.0, 3.0, 0.4}) {
    for (double x : {0.0, 0.2, 0.7}) {
      const Spectrum a = find_spectrum(StringConfig(s, x), 15.0);
      const Spectrum b = find_spectrum(StringConfig(1.0 / s, x), 15.0);
      REQUIRE(a.entries.size() == b.entries.size());
      for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(std::abs(a.entries[i].omega - b.entries[i].omega) < 1e-9);
        CHECK(a.entries[i].multiplicity == b.entries[i].multiplicity);
      }
    }
  }
}

TEST_CASE("spectrum is invariant under x -> 1/x") {
  const double x = 0.25;
  const StringConfig direct(2.0, x);
  const StringConfig mapped(2.0, canonical_tension_ratio(1.0 / x));
  const Spectrum a = find_spectrum(direct, 12.0);
  const Spectrum b = find_spectrum(mapped, 12.0);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(std::abs(a.entries[i].omega - b.entries[i].omega) < 1e-10);
  }
}

TEST_CASE("Weyl density") {
  for (double s : {2.0, 3.0}) {
    for (double x : {0.1, 0.6}) {
      const StringConfig cfg(s, x);
      const double omega_max = 200.0 / cfg.total_length() + 0.123;
      const double count = find_spectrum(cfg, omega_max).total_multiplicity();
      CHECK(std::abs(count * kPi / (cfg.total_length() * omega_max) - 1.0) < 0.05);
    }
  }
}

TEST_CASE("x = 0 branches") {
  const auto omegas = [](const Spectrum& spec) {
    std::vector<double> out;
    for (const SpectralLine& l : spec.entries) {
      out.push_back(l.omega);
      CHECK(l.multiplicity == 1);
    }
    return out;
  };
  const std::vector<double> first = omegas(branch_spectrum_x0(1, Branch::first, 3));
  REQUIRE(first.size() == 3);
  CHECK(first[0] == 2.0);
  CHECK(first[1] == 4.0);
  CHECK(first[2] == 6.0);
  const std::vector<double> second = omegas(branch_spectrum_x0(3, Branch::second, 2));
  REQUIRE(second.size() == 2);
  CHECK(second[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(second[1] == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  const std::vector<double> single = omegas(branch_spectrum_x0(2, Branch::first, 1));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 3.0);
}

TEST_CASE("scan step resolves the finer branch") {
  CHECK(scan_step(StringConfig(1.0, 0.5)) == doctest::Approx(kPi / (4.0 * kPi * 2.0)));
  CHECK(scan_step(StringConfig(0.5, 0.5)) == doctest::Approx(kPi * 0.5 / (4.0 * kPi * 1.5)));
}

TEST_CASE("count_up_to") {
  const Spectrum spec = find_spectrum(StringConfig(2.0, 0.0), 10.0);
  CHECK(spec.count_up_to(1.0) == 0);
  CHECK(spec.count_up_to(3.0) == 3);
  CHECK(spec.count_up_to(10.0) == 9);
}

TEST_CASE("a root just past omega_max does not inflate the last multiplicity") {
  const StringConfig cfg(3.7323752315798107, 0.43379289143139554);
  const double omega_max = 29.806091407685912;
  const Spectrum sp = find_spectrum(cfg, omega_max);
  REQUIRE(!sp.entries.empty());
  CHECK(sp.entries.back().multiplicity == 1);
  CHECK(sp.total_multiplicity() == count_modes(cfg, omega_max).zeros_minus_poles);
}
