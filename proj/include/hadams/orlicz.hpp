#pragma once

#include <limits>

#include "hadams/log_radial.hpp"
#include "hadams/quadrature.hpp"

namespace hadams {

// Luxemburg-type norm parameters.  The unit threshold of the gauge may be
// replaced by any positive constant; it is a free parameter here because the
// sharp-constant thresholds of the underlying inequalities are not known
// numerically.
struct OrliczSpec {
  double threshold = 1.0;
  double lambda_rel_tol = 1e-10;
  double bracket_growth = 4.0;

  void validate() const;
};

// Series truncation order of phi_p(t) = e^{t^2} - sum_{k<p} t^{2k}/k!.
struct PhiPSpec {
  int order = 1;  // p >= 1; p = 1 reduces to e^{t^2} - 1
};

struct ExpFunctionalValue {
  double value = 0;
  double abs_error = 0;
  // set when an exponent had to be capped; the value is a saturated lower
  // bound, never silently trusted
  bool precision_loss = false;
};

// omega * int (e^{gamma v(s)^2} - 1) e^{-2Ns} ds with the plateau tail in
// closed form.  Finite for every representable f (v is bounded).  Exponents
// are grouped as gamma*v^2 - 2Ns before exponentiation.
ExpFunctionalValue exp_functional(const LogRadialFunction& f, double gamma,
                                  const QuadratureSpec& q);

// Same integral restricted to s in [s_lo, s_hi] (log coordinates; |x| between
// e^{-s_hi} and e^{-s_lo}).  The plateau tail is included iff s_hi is +inf.
ExpFunctionalValue exp_functional_window(
    const LogRadialFunction& f, double gamma, const QuadratureSpec& q,
    double s_lo, double s_hi = std::numeric_limits<double>::infinity());

// The unique lambda with exp_functional(f, 1/lambda^2) = threshold, located by
// geometric bracket expansion plus bisection on log(lambda); the functional is
// strictly decreasing in lambda so the root is unique.  Zero function -> 0 by
// convention (F == 0 <= threshold for every lambda).
double orlicz_norm(const LogRadialFunction& f, const OrliczSpec& spec,
                   const QuadratureSpec& q);

// sqrt( 2Nk / (gamma_N log(1 + (N!/pi^N) theta e^{2Nk})) ); a rigorous lower
// bound for the Orlicz norm of the Moser function f_k, tending to
// 1/sqrt(gamma_N).
double orlicz_lower_bound_moser(int k, const Dimension& dim, double theta);

// omega * int phi_p(|v(s)|/lambda) e^{-2Ns} ds; p = 1 agrees with
// exp_functional(f, 1/lambda^2).
ExpFunctionalValue phi_p_functional(const LogRadialFunction& f,
                                    const PhiPSpec& p, double lambda,
                                    const QuadratureSpec& q);

}  // namespace hadams
