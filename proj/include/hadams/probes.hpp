#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hadams/concentration.hpp"
#include "hadams/log_radial.hpp"
#include "hadams/norms.hpp"
#include "hadams/orlicz.hpp"
#include "hadams/quadrature.hpp"

namespace hadams {

struct ProbeRow {
  std::string label;
  double measured = 0;
  double bound = 0;
  double margin = 0;
  bool pass = true;
  std::string note;
};

// Structured verifier output: parameters, per-input rows with bounds and
// margins, optional trend fit.  Every failing row carries its witness input
// in the label/note.
struct ProbeReport {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  std::vector<ProbeRow> rows;
  double log_slope = std::numeric_limits<double>::quiet_NaN();
  double slope_target = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
  std::string note;

  double max_measured() const;
};

// The Moser function f_k in log coordinates: v = sqrt(2Nk/gamma_N) * L(s/k).
LogRadialFunction moser_function(const Dimension& dim, double k);

// A nonnegative nondecreasing function on the t-line (zero left of the first
// breakpoint, plateau after the last); the target of the half-log transform.
struct LineFunction {
  std::vector<double> t;
  std::vector<double> w;

  double value(double x) const;
  double derivative_l2_sq() const;  // exact
  bool is_zero() const;
};

// Sup of the exponential functional over an h-normalized corpus.  For
// gamma > gamma_N also reports the divergence series along normalized Moser
// functions with the fitted log-slope against 2N(gamma - gamma_N)/gamma_N.
ProbeReport adams_sup_probe(std::span<const LogRadialFunction> corpus,
                            double gamma, const QuadratureSpec& q,
                            int threads = 1, int moser_k_lo = 10,
                            int moser_k_hi = 25);

// I_2 = exponential functional restricted to |x| > r_0, against the explicit
// power-series bound obtained from the pointwise radial estimate.
// Requires h_norm(f) <= 1.
ProbeReport exterior_series_bound(const LogRadialFunction& f, double r_0,
                                  double gamma, const QuadratureSpec& q);

// w = (u - u(r_0)) * sqrt(1 + ((N-1)!/pi^N) ||u||_{H^1}^2 / r_0^{2N-1}) inside
// B(r_0): supported in the ball, Hardy-gradient <= 1, and u^2 <= w^2 + d(r_0)
// pointwise.  Requires the admissibility condition pi^N r_0^{2N-1}/(N-1)! >= 1.
// Inputs with h_norm > 1 are renormalized first (noted in the report).
struct AuxTransformResult {
  LogRadialFunction w;
  ProbeReport report;
};
AuxTransformResult auxiliary_w_transform(const LogRadialFunction& f, double r_0,
                                         const QuadratureSpec& q);

// The change of variable sigma = r^N reducing the ball inequality to the 2D
// one: both integral identities evaluated by independent quadratures.
ProbeReport ball_to_2d_reduction(const LogRadialFunction& f,
                                 const QuadratureSpec& q);

// w(t) = sqrt(gamma_N) v(e^{-t/2}) for admissible f (nonnegative, radially
// nonincreasing, compactly supported, Hardy-gradient <= 1); verifies the three
// transform identities by independent quadrature.
struct HalfLogResult {
  LineFunction w;
  ProbeReport report;
};
HalfLogResult half_log_transform(const LogRadialFunction& f, double gamma_check,
                                 const QuadratureSpec& q);

// Ratio probe for the subcritical inequality: exp functional over ||u||_L2^2
// per admissible member; inadmissible members are skipped with notice.
ProbeReport adachi_ratio_probe(std::span<const LogRadialFunction> corpus,
                               double gamma, const QuadratureSpec& q,
                               int threads = 1);

// The sharpness witness series along f_k at gamma = gamma_N: the
// concentration-core integral (over |x| < e^{-k}) equals
// (pi^N/N!)(1 - e^{-2Nk}) and the full functional dominates it, while the L^2
// norm vanishes.  Row fields: measured = full functional, bound = core
// integral; note carries l2 and the ratio.
struct MoserWitnessRow {
  int k;
  double full;
  double core;
  double envelope;  // (pi^N/N!)(1 - e^{-2Nk})
  double l2;
  double ratio;  // full / l2^2
};
std::vector<MoserWitnessRow> moser_sharpness_series(const Dimension& dim,
                                                    std::span<const int> ks,
                                                    const QuadratureSpec& q);

// The reduced 1D inequality: int (e^{beta w^2}-1) e^{-Nt} dt <=
// C_beta int w^2 e^{-Nt} dt for 0 < beta, beta(1+eps) < 1, with the
// constructive constants M = e-1 and C_eps = 1 + 1/eps.
ProbeReport one_d_reduced_check(const LineFunction& w, const Dimension& dim,
                                double beta, double eps,
                                const QuadratureSpec& q);

double least_squares_slope(std::span<const double> xs,
                           std::span<const double> ys, double* intercept);

}  // namespace hadams
