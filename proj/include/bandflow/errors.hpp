#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bandflow {

// Invalid family parameters, or a coefficient evaluation that came out
// non-finite or with the wrong sign.
class CoefficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Divergent improper integral, or adaptive quadrature that ran out of
// panels before reaching its tolerance. `achieved` is the best estimate
// of the remaining error.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// A hypothesis of the construction does not hold; the message states the
// violated inequality with the numbers that broke it.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Initial data rejected: incompatible endpoint slopes or not above the
// stationary-profile threshold.
class DatumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values during time stepping. Carries the last finite state
// so the caller can dump it.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, std::vector<double> last_u, double t)
      : std::runtime_error(what), last_u_(std::move(last_u)), time_(t) {}
  const std::vector<double>& last_u() const { return last_u_; }
  double time() const { return time_; }

 private:
  std::vector<double> last_u_;
  double time_;
};

// Traces that cannot be checked together (mismatched grids or time
// stamps) or a check invoked without its required inputs.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed run config or CLI usage. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bandflow
