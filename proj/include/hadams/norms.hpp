#pragma once

#include <vector>

#include "hadams/log_radial.hpp"
#include "hadams/quadrature.hpp"

namespace hadams {

// All norms of one function, with a quadrature error bound on the aggregate.
// h_norm^2 = l2^2 + grad_l2^2 + hardy_grad^2 within error_bound; the H^1 norm
// convention ||u||_{H^1}^2 = ||u||_{L^2}^2 + ||grad u||_{L^2}^2 is used.
struct NormReport {
  double l2 = 0;
  double grad_l2 = 0;
  double hardy_grad = 0;
  double h_norm = 0;
  double error_bound = 0;
};

// ||u||_{L^2(R^{2N})} = sqrt( omega * int v(s)^2 e^{-2Ns} ds ); the plateau
// tail is integrated in closed form: v_m^2 e^{-2N s_m}/(2N).
double l2_norm(const LogRadialFunction& f, const QuadratureSpec& q);
QuadratureResult l2_norm_sq_detail(const LogRadialFunction& f,
                                   const QuadratureSpec& q);

// squared L^2 mass restricted to s in [s_lo, s_hi] (|x| between e^{-s_hi} and
// e^{-s_lo}); the plateau part is closed-form
QuadratureResult l2_norm_sq_window(const LogRadialFunction& f,
                                   const QuadratureSpec& q, double s_lo,
                                   double s_hi);

// ||grad u||_{L^2(R^{2N})} = sqrt( omega * int v'(s)^2 e^{-(2N-2)s} ds )
double h1_gradient_norm(const LogRadialFunction& f, const QuadratureSpec& q);
QuadratureResult h1_gradient_norm_sq_detail(const LogRadialFunction& f,
                                            const QuadratureSpec& q);

// ||grad u / |x|^{N-1}||_{L^2(R^{2N})} = sqrt(2 pi^N/(N-1)!) * ||v'||_{L^2(R)},
// computed exactly (v' is piecewise constant; the plateau contributes 0).
double hardy_gradient_norm(const LogRadialFunction& f);

NormReport h_norm(const LogRadialFunction& f, const QuadratureSpec& q);

// Pointwise radial bounds checked on the breakpoint grid:
//   |u(x)| <= sqrt((N-1)!/pi^N) * ||u||_{H^1}           / |x|^{N-1/2}
//   |u(x)| <= sqrt((N-1)!/pi^N) * (||u|| ||grad u||)^{1/2} / |x|^{N-1/2}
// Slack = bound - |u|; nonnegative minimum slack = pass.
struct RadialBoundReport {
  double min_slack_h1 = 0;
  double min_slack_split = 0;
  double argmin_s = 0;
  bool pass = true;
  double violating_s = 0;  // meaningful only when !pass
};

RadialBoundReport radial_bound_check(const LogRadialFunction& f,
                                     const QuadratureSpec& q);

// Piecewise-linear interpolant of v(s) = log(1+s) on the given grid
// (grid[0] == 0, grid covers [0, S] with S >= 10); the witness that the
// Hardy-type space is strictly larger than H^N.
LogRadialFunction strict_inclusion_witness(Dimension dim,
                                           const std::vector<double>& grid);

}  // namespace hadams
