#pragma once

#include <stdexcept>
#include <string>

namespace chronoq {

/// Caller violated a precondition (bad index, bad config, wrong regime).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive step size collapsed below the underflow floor.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-finite value appeared, or an iterative kernel failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few usable error samples to fit a convergence slope.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No qualifying population peak inside the scan horizon.
class DetectionError : public std::runtime_error {
 public:
  DetectionError(const std::string& what, double best_peak, double best_time)
      : std::runtime_error(what), best_peak_(best_peak), best_time_(best_time) {}

  double best_peak() const noexcept { return best_peak_; }
  double best_time() const noexcept { return best_time_; }

 private:
  double best_peak_;
  double best_time_;
};

}  // namespace chronoq
