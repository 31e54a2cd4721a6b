#pragma once

#include <stdexcept>
#include <string>

namespace squatcalc {

// Numerical failure of a linear-algebra kernel (maps to CLI exit code 3).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix inversion rejected: smallest singular value of the complex embedding
// is below 1e-12 relative to the largest.
struct NotInvertibleError : SolverError {
  double sigma_min;
  double sigma_max;
  NotInvertibleError(double smin, double smax)
      : SolverError("matrix not invertible (sigma_min=" + std::to_string(smin) +
                    ", sigma_max=" + std::to_string(smax) + ")"),
        sigma_min(smin),
        sigma_max(smax) {}
};

// s lies on (or numerically too close to) the S-spectrum: the spectral pencil
// Q_s(T) is not invertible.  Carries the pencil's smallest singular value as a
// certificate.
struct NotInResolventSetError : SolverError {
  double pencil_sigma_min;
  explicit NotInResolventSetError(double smin)
      : SolverError("point not in the S-resolvent set (pencil sigma_min=" +
                    std::to_string(smin) + ")"),
        pencil_sigma_min(smin) {}
};

// No admissible system of contour circles exists for the requested spectrum /
// exclusion configuration (maps to CLI exit code 4).
struct ContourInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Node-doubling quadrature did not meet its convergence target before the
// node budget ran out (maps to CLI exit code 4).
struct QuadratureFailureError : std::runtime_error {
  double last_delta;
  explicit QuadratureFailureError(double delta)
      : std::runtime_error("quadrature did not converge (last successive difference=" +
                           std::to_string(delta) + ")"),
        last_delta(delta) {}
};

// A documented API precondition was violated, e.g. transforming a function
// with no declared value at infinity (maps to CLI exit code 2).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// The scan for a real point of the resolvent set failed (maps to CLI exit
// code 5).
struct ResolventPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace squatcalc
