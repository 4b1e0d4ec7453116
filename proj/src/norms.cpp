#include "hadams/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hadams {

namespace {

// integral of (a + b*s)^2 e^{-rate*s} over the pre-split pieces of [lo, hi]
QuadratureResult weighted_square_segment(double a, double b, double lo, double hi,
                                         double rate, const QuadratureSpec& q) {
  auto pieces = split_by_exponent(lo, hi, 0.0, -rate, 0.0);
  auto f = [a, b, rate](double s) {
    const double v = a + b * s;
    return v * v * std::exp(-rate * s);
  };
  // tolerance is enforced across all segments by the caller's accumulation;
  // per-segment convergence uses the same spec
  return integrate_adaptive(f, pieces, q);
}

}  // namespace

QuadratureResult l2_norm_sq_detail(const LogRadialFunction& f,
                                   const QuadratureSpec& q) {
  const auto& s = f.breakpoints();
  const auto& v = f.values();
  const double rate = f.dim().volume_rate();

  QuadratureResult acc;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
    const double b = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    const double a = v[i] - b * s[i];
    acc += weighted_square_segment(a, b, s[i], s[i + 1], rate, q);
  }
  const double vm = f.plateau_value();
  if (vm != 0.0) {
    const double tail = vm * vm * std::exp(-rate * f.plateau_start()) / rate;
    acc.value += tail;
    acc.abs_error += tail * 1e-15;
  }
  acc.value *= f.dim().sphere_area;
  acc.abs_error *= f.dim().sphere_area;
  return acc;
}

double l2_norm(const LogRadialFunction& f, const QuadratureSpec& q) {
  return std::sqrt(std::max(0.0, l2_norm_sq_detail(f, q).value));
}

QuadratureResult l2_norm_sq_window(const LogRadialFunction& f,
                                   const QuadratureSpec& q, double s_lo,
                                   double s_hi) {
  const auto& s = f.breakpoints();
  const auto& v = f.values();
  const double rate = f.dim().volume_rate();

  QuadratureResult acc;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double lo = std::max(s[i], s_lo), hi = std::min(s[i + 1], s_hi);
    if (!(hi > lo) || (v[i] == 0.0 && v[i + 1] == 0.0)) continue;
    const double b = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    const double a = v[i] - b * s[i];
    acc += weighted_square_segment(a, b, lo, hi, rate, q);
  }
  const double vm = f.plateau_value();
  if (vm != 0.0 && s_hi > f.plateau_start()) {
    const double lo = std::max(f.plateau_start(), s_lo);
    double tail = vm * vm * std::exp(-rate * lo) / rate;
    if (std::isfinite(s_hi)) tail -= vm * vm * std::exp(-rate * s_hi) / rate;
    acc.value += tail;
    acc.abs_error += tail * 1e-15;
  }
  acc.value *= f.dim().sphere_area;
  acc.abs_error *= f.dim().sphere_area;
  return acc;
}

QuadratureResult h1_gradient_norm_sq_detail(const LogRadialFunction& f,
                                            const QuadratureSpec& q) {
  const auto& s = f.breakpoints();
  const auto& v = f.values();
  const double rate = f.dim().volume_rate() - 2.0;

  QuadratureResult acc;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double b = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    if (b == 0.0) continue;
    acc += weighted_square_segment(b, 0.0, s[i], s[i + 1], rate, q);
  }
  acc.value *= f.dim().sphere_area;
  acc.abs_error *= f.dim().sphere_area;
  return acc;
}

double h1_gradient_norm(const LogRadialFunction& f, const QuadratureSpec& q) {
  return std::sqrt(std::max(0.0, h1_gradient_norm_sq_detail(f, q).value));
}

double hardy_gradient_norm(const LogRadialFunction& f) {
  const auto& s = f.breakpoints();
  const auto& v = f.values();
  double sum = 0.0;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double ds = s[i + 1] - s[i];
    const double b = (v[i + 1] - v[i]) / ds;
    sum += b * b * ds;
  }
  return std::sqrt(f.dim().sphere_area * sum);
}

NormReport h_norm(const LogRadialFunction& f, const QuadratureSpec& q) {
  NormReport r;
  const QuadratureResult l2sq = l2_norm_sq_detail(f, q);
  const QuadratureResult grsq = h1_gradient_norm_sq_detail(f, q);
  r.l2 = std::sqrt(std::max(0.0, l2sq.value));
  r.grad_l2 = std::sqrt(std::max(0.0, grsq.value));
  r.hardy_grad = hardy_gradient_norm(f);
  const double hsq = l2sq.value + grsq.value + r.hardy_grad * r.hardy_grad;
  r.h_norm = std::sqrt(std::max(0.0, hsq));
  const double err_sq = l2sq.abs_error + grsq.abs_error + 4e-16 * hsq;
  r.error_bound = (r.h_norm > 0) ? err_sq / (2.0 * r.h_norm) + 1e-300 : err_sq;
  return r;
}

RadialBoundReport radial_bound_check(const LogRadialFunction& f,
                                     const QuadratureSpec& q) {
  const Dimension& d = f.dim();
  const double c_rad = std::sqrt(2.0 / d.sphere_area);  // sqrt((N-1)!/pi^N)
  const NormReport nr = h_norm(f, q);
  const double h1 = std::sqrt(nr.l2 * nr.l2 + nr.grad_l2 * nr.grad_l2);
  const double split = std::sqrt(nr.l2 * nr.grad_l2);

  RadialBoundReport out;
  out.min_slack_h1 = std::numeric_limits<double>::infinity();
  out.min_slack_split = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < f.size(); ++i) {
    const double s = f.breakpoints()[i];
    const double growth = std::exp((d.n - 0.5) * s);  // |x|^{-(N-1/2)}
    const double u = std::abs(f.values()[i]);
    const double s1 = c_rad * h1 * growth - u;
    const double s2 = c_rad * split * growth - u;
    if (s1 < out.min_slack_h1) {
      out.min_slack_h1 = s1;
      out.argmin_s = s;
    }
    out.min_slack_split = std::min(out.min_slack_split, s2);
  }
  const double floor = -q.abs_tol;
  out.pass = out.min_slack_h1 >= floor && out.min_slack_split >= floor;
  if (!out.pass) out.violating_s = out.argmin_s;
  return out;
}

LogRadialFunction strict_inclusion_witness(Dimension dim,
                                           const std::vector<double>& grid) {
  if (grid.size() < 2 || grid.front() != 0.0) {
    throw std::invalid_argument(
        "strict_inclusion_witness: grid must start at 0");
  }
  if (grid.back() < 10.0) {
    throw std::invalid_argument(
        "strict_inclusion_witness: grid must cover [0, S] with S >= 10");
  }
  std::vector<double> v;
  v.reserve(grid.size());
  for (double s : grid) {
    if (s < 0) throw std::invalid_argument("strict_inclusion_witness: negative grid point");
    v.push_back(std::log1p(s));
  }
  return LogRadialFunction(dim, grid, std::move(v));
}

}  // namespace hadams
