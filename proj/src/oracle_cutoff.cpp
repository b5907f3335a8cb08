#include "pwstring/oracle_cutoff.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "pwstring/errors.hpp"

namespace pwstring {

namespace {
constexpr double kTailDepth = 40.0;
}

double damped_mode_sum(const Spectrum& spec, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("damped_mode_sum: epsilon must be positive");
  if (spec.entries.empty()) return 0.0;
  if (spec.omega_max * epsilon < kTailDepth) {
    std::ostringstream msg;
    msg << "damped_mode_sum: spectrum ends at omega_max = " << spec.omega_max
        << "; epsilon = " << epsilon << " needs omega_max >= " << kTailDepth / epsilon;
    throw DomainError(msg.str());
  }
  double sum = 0.0;
  for (const auto& e : spec.entries) {
    sum += e.multiplicity * e.omega * std::exp(-epsilon * e.omega);
  }
  return 0.5 * sum;
}

std::vector<double> default_epsilons(double total_length) {
  std::vector<double> out;
  for (double f = 0.05; out.size() < 5; f *= 0.5) out.push_back(f * total_length);
  return out;
}

CutoffResult casimir_by_cutoff(const StringConfig& cfg, const std::vector<double>& epsilons) {
  if (epsilons.size() < 4) throw DomainError("casimir_by_cutoff: need at least 4 epsilons");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || (i > 0 && !(epsilons[i] < epsilons[i - 1]))) {
      throw DomainError("casimir_by_cutoff: epsilons must be positive and strictly decreasing");
    }
  }
  const double smallest = epsilons.back();
  if (smallest < 1e-3) throw DomainError("casimir_by_cutoff: smallest epsilon must be >= 1e-3");

  const double omega_max = 1.05 * kTailDepth / smallest;
  const Spectrum composite = find_spectrum(cfg, omega_max);
  const Spectrum uniform = uniform_spectrum(cfg.total_length(), omega_max);

  CutoffResult out;
  const auto m = static_cast<Eigen::Index>(epsilons.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double eps = epsilons[static_cast<std::size_t>(i)];
    const double diff = damped_mode_sum(composite, eps) - damped_mode_sum(uniform, eps);
    out.epsilon_samples.push_back({eps, diff});
    design(i, 0) = 1.0;
    design(i, 1) = eps;
    design(i, 2) = eps * eps;
    rhs(i) = diff;
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  out.coefficients = {c(0), c(1), c(2)};
  out.extrapolated_energy = c(0);
  out.fit_residual = (design * c - rhs).cwiseAbs().maxCoeff();
  // Refit without the coarsest damping; the shift of c0 gauges the extrapolation error.
  const Eigen::Vector3d c_fine =
      design.bottomRows(m - 1).colPivHouseholderQr().solve(rhs.tail(m - 1));
  out.abs_error_estimate = std::abs(c(0) - c_fine(0)) + out.fit_residual;

  if (out.fit_residual > 1e-3 * std::abs(c(0)) + 1e-6) {
    std::ostringstream msg;
    msg << "extrapolation unstable: fit residual " << out.fit_residual << " for c0 = " << c(0)
        << " (c1 = " << c(1) << ", c2 = " << c(2) << ")";
    throw NumericalError(msg.str(), c(0));
  }
  return out;
}

CutoffResult casimir_by_cutoff(const StringConfig& cfg) {
  return casimir_by_cutoff(cfg, default_epsilons(cfg.total_length()));
}

}  // namespace pwstring
