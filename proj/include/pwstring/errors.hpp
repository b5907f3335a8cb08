#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace pwstring {

/// Input outside an operation's domain (bad parameters, violated preconditions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical method failed to reach its target. Carries the best estimate
/// obtained before giving up, which may be NaN when none exists.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          double best_estimate = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

/// The local winding integral around a located root did not settle on an integer.
class MultiplicityUndecided : public NumericalError {
 public:
  MultiplicityUndecided(const std::string& what, double omega)
      : NumericalError(what, omega), omega_(omega) {}

  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

}  // namespace pwstring
