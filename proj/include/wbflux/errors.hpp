#ifndef WBFLUX_ERRORS_HPP
#define WBFLUX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wbflux {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The integrand f'/b of the equilibrium map is unbounded on the requested range.
struct NonIntegrableSource : Error {
  using Error::Error;
};

/// A structural assumption on the model (D' > 0, consistency of f and f', ...) failed.
struct AssumptionViolation : Error {
  using Error::Error;
};

/// A root solve did not reach the requested residual within the iteration cap.
struct ConvergenceFailure : Error {
  using Error::Error;
};

/// A quadrature encountered a non-finite integrand value.
struct QuadratureFailure : Error {
  using Error::Error;
};

/// A cell value left the admissible envelope; usually a CFL misconfiguration.
struct StateBlowup : Error {
  StateBlowup(const std::string& msg, long step_index_, double value_)
      : Error(msg), step_index(step_index_), value(value_) {}
  long step_index;
  double value;
};

/// The run did not retain its space-time history.
struct HistoryUnavailable : Error {
  using Error::Error;
};

/// Two states do not live on compatible (integer-refined) grids.
struct IncompatibleGrids : Error {
  using Error::Error;
};

/// Bad configuration input (unknown key, malformed value, inconsistent setup).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace wbflux

#endif
