#include "hadams/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hadams {

namespace {

constexpr double kExpCap = 700.0;

// e^{phi} with saturation; phi = gamma*v^2 - rate*s is the grouped exponent
double capped_exp(double phi, bool* flag) {
  if (phi > kExpCap) {
    *flag = true;
    return std::exp(kExpCap);
  }
  return std::exp(phi);
}

// pieces of [lo, hi] sized so the grouped exponent varies by <= 30 each;
// pieces where it stays below -745 underflow to 0 and are dropped
std::vector<std::pair<double, double>> exp_pieces(double g, double a, double b,
                                                  double rate, double lo,
                                                  double hi) {
  return split_by_exponent(lo, hi, g * b * b, 2.0 * g * a * b - rate,
                           g * a * a);
}

struct SegmentLine {
  double a, b;    // v = a + b*s on [lo, hi]
  double lo, hi;
};

std::vector<SegmentLine> segments_in_window(const LogRadialFunction& f,
                                            double s_lo, double s_hi) {
  std::vector<SegmentLine> out;
  const auto& s = f.breakpoints();
  const auto& v = f.values();
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double lo = std::max(s[i], s_lo);
    const double hi = std::min(s[i + 1], s_hi);
    if (!(hi > lo)) continue;
    const double slope = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    out.push_back({v[i] - slope * s[i], slope, lo, hi});
  }
  return out;
}

}  // namespace

void OrliczSpec::validate() const {
  if (!(threshold > 0)) {
    throw std::invalid_argument("OrliczSpec: threshold must be positive");
  }
  if (!(lambda_rel_tol > 0)) {
    throw std::invalid_argument("OrliczSpec: lambda_rel_tol must be positive");
  }
  if (!(bracket_growth > 1)) {
    throw std::invalid_argument("OrliczSpec: bracket_growth must exceed 1");
  }
}

ExpFunctionalValue exp_functional_window(const LogRadialFunction& f,
                                         double gamma, const QuadratureSpec& q,
                                         double s_lo, double s_hi) {
  if (!(gamma > 0)) {
    throw std::invalid_argument("exp_functional: gamma must be positive");
  }
  const double rate = f.dim().volume_rate();
  ExpFunctionalValue out;
  bool capped = false;

  for (const SegmentLine& seg : segments_in_window(f, s_lo, s_hi)) {
    if (seg.a == 0.0 && seg.b == 0.0) continue;
    auto integrand = [&](double s) {
      const double v = seg.a + seg.b * s;
      const double e = gamma * v * v;
      const double phi = e - rate * s;
      // expm1(e)*exp(-rate*s) rewritten as exp(phi)*(1 - e^{-e})
      return capped_exp(phi, &capped) * (-std::expm1(-e));
    };
    QuadratureResult r = integrate_adaptive(
        integrand, exp_pieces(gamma, seg.a, seg.b, rate, seg.lo, seg.hi), q);
    out.value += r.value;
    out.abs_error += r.abs_error;
  }

  // plateau tail over [max(s_m, s_lo), s_hi]
  const double vm = f.plateau_value();
  if (vm != 0.0 && s_hi > f.plateau_start()) {
    const double t_lo = std::max(f.plateau_start(), s_lo);
    const double e = gamma * vm * vm;
    const double phi_lo = e - rate * t_lo;
    double tail = capped_exp(phi_lo, &capped) * (-std::expm1(-e)) / rate;
    if (std::isfinite(s_hi)) {
      const double phi_hi = e - rate * s_hi;
      tail -= capped_exp(phi_hi, &capped) * (-std::expm1(-e)) / rate;
    }
    out.value += tail;
    out.abs_error += std::abs(tail) * 1e-15;
  }

  out.value *= f.dim().sphere_area;
  out.abs_error *= f.dim().sphere_area;
  out.precision_loss = capped;
  return out;
}

ExpFunctionalValue exp_functional(const LogRadialFunction& f, double gamma,
                                  const QuadratureSpec& q) {
  return exp_functional_window(f, gamma, q,
                               -std::numeric_limits<double>::infinity());
}

double orlicz_norm(const LogRadialFunction& f, const OrliczSpec& spec,
                   const QuadratureSpec& q) {
  spec.validate();
  if (f.is_zero()) return 0.0;

  auto F = [&](double lambda) {
    return exp_functional(f, 1.0 / (lambda * lambda), q).value;
  };
  const double theta = spec.threshold;

  double hi = f.max_abs_value();
  int steps = 0;
  while (F(hi) > theta) {
    hi *= spec.bracket_growth;
    if (++steps > 200) {
      throw std::runtime_error(
          "orlicz_norm: upper bracket expansion failed (degenerate spec)");
    }
  }
  double lo = hi / spec.bracket_growth;
  steps = 0;
  while (F(lo) < theta) {
    hi = lo;
    lo /= spec.bracket_growth;
    if (++steps > 200) {
      throw std::runtime_error(
          "orlicz_norm: lower bracket expansion failed (degenerate spec)");
    }
  }

  // bisection on log(lambda); width in log equals relative accuracy
  double t_lo = std::log(lo), t_hi = std::log(hi);
  while (t_hi - t_lo > spec.lambda_rel_tol) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (F(std::exp(mid)) > theta) {
      t_lo = mid;
    } else {
      t_hi = mid;
    }
  }
  return std::exp(0.5 * (t_lo + t_hi));
}

double orlicz_lower_bound_moser(int k, const Dimension& dim, double theta) {
  if (k < 1) throw std::invalid_argument("orlicz_lower_bound_moser: k >= 1");
  if (!(theta > 0)) {
    throw std::invalid_argument("orlicz_lower_bound_moser: theta > 0");
  }
  const double t = 2.0 * dim.n * k;
  const double c = theta / dim.ball_volume;  // (N!/pi^N) * theta
  // log(1 + c e^t), stable for large t
  double L;
  if (t + std::log(c) > 40.0) {
    L = t + std::log(c) + std::log1p(std::exp(-t) / c);
  } else {
    L = std::log1p(c * std::exp(t));
  }
  return std::sqrt(t / (dim.gamma * L));
}

ExpFunctionalValue phi_p_functional(const LogRadialFunction& f,
                                    const PhiPSpec& p, double lambda,
                                    const QuadratureSpec& q) {
  if (p.order < 1) throw std::invalid_argument("phi_p_functional: p >= 1");
  if (!(lambda > 0)) throw std::invalid_argument("phi_p_functional: lambda > 0");

  const double rate = f.dim().volume_rate();
  const double g = 1.0 / (lambda * lambda);
  const int P = p.order;
  ExpFunctionalValue out;
  bool capped = false;

  // phi_p at x = (v/lambda)^2, times e^{-rate*s}, evaluated without forming
  // e^x alone: series sum_{k>=p} x^k/k! for moderate x, grouped exponent
  // otherwise.
  auto phi_p_weighted = [&](double x, double s) {
    const double w = rate * s;
    if (x <= 40.0 + P) {
      double term = 1.0;
      for (int k = 1; k <= P; ++k) term *= x / k;
      double sum = term;
      int k = P;
      while (term > 1e-18 * sum || k <= x + 4) {
        ++k;
        term *= x / k;
        sum += term;
        if (k > 400) break;
      }
      return sum * std::exp(-w);
    }
    double poly = 0.0, t = 1.0;
    for (int k = 0; k < P; ++k) {
      poly += t;
      t *= x / (k + 1);
    }
    return capped_exp(x - w, &capped) - poly * std::exp(-w);
  };

  for (const SegmentLine& seg : segments_in_window(
           f, -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity())) {
    if (seg.a == 0.0 && seg.b == 0.0) continue;
    auto integrand = [&](double s) {
      const double v = (seg.a + seg.b * s) / lambda;
      return phi_p_weighted(v * v, s);
    };
    QuadratureResult r = integrate_adaptive(
        integrand, exp_pieces(g, seg.a, seg.b, rate, seg.lo, seg.hi), q);
    out.value += r.value;
    out.abs_error += r.abs_error;
  }

  const double vm = f.plateau_value();
  if (vm != 0.0) {
    const double x = (vm / lambda) * (vm / lambda);
    const double sm = f.plateau_start();
    // int_{s_m}^inf phi_p(x) e^{-rate s} ds = phi_p_weighted(x, s_m)/rate
    const double tail = phi_p_weighted(x, sm) / rate;
    out.value += tail;
    out.abs_error += std::abs(tail) * 1e-15;
  }

  out.value *= f.dim().sphere_area;
  out.abs_error *= f.dim().sphere_area;
  out.precision_loss = capped;
  return out;
}

}  // namespace hadams
