#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace hadams {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 10000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    abs_error += o.abs_error;
    subdivisions += o.subdivisions;
    converged = converged && o.converged;
    return *this;
  }
};

// Thrown when the adaptive scheme fails to reach tolerance within
// max_subdivisions.  Carries the partial value and its error estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult partial_result)
      : std::runtime_error(what), partial(partial_result) {}
  QuadratureResult partial;
};

// Adaptive Gauss-Kronrod (G7,K15) over a list of initial pieces, refined
// worst-error-first against a global tolerance.  Pieces are half-open
// subintervals of the integrand's domain; callers pre-split long intervals so
// that an exponential weight cannot hide all its mass between sample points.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::vector<std::pair<double, double>> pieces,
                                    const QuadratureSpec& spec);

// Convenience: single interval [a, b].
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureSpec& spec);

// Splits [a, b] into pieces on which the quadratic exponent
// q2*s^2 + q1*s + q0 varies by at most `max_swing` (vertex inserted first so
// every piece is monotone in the exponent).  Pieces whose exponent stays
// below -745 are dropped: the integrand underflows to exactly 0 there.
std::vector<std::pair<double, double>> split_by_exponent(
    double a, double b, double q2, double q1, double q0,
    double max_swing = 30.0);

}  // namespace hadams
