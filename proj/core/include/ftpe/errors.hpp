#pragma once

#include <stdexcept>
#include <string>

namespace ftpe {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested step would alias the fast carrier (or exceeds an accuracy bound).
class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// An eigenphase of the one-period propagator sits on the branch cut of log.
class BranchAmbiguity : public Error {
 public:
  explicit BranchAmbiguity(const std::string& what, double coarse_time = 0.0)
      : Error(what), coarse_time_(coarse_time) {}
  double coarse_time() const noexcept { return coarse_time_; }

 private:
  double coarse_time_;
};

/// Schrieffer-Wolff denominators vanish (E_b ~ 0).
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class NoMaximumFound : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace ftpe
