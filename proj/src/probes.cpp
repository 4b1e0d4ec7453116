#include "hadams/probes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hadams/parallel.hpp"

namespace hadams {

namespace {

constexpr double kIdentityTol = 1e-8;

// int (a + b t)^2 e^{-rate t} over [lo, hi]
QuadratureResult line_square_piece(double a, double b, double lo, double hi,
                                   double rate, const QuadratureSpec& q) {
  auto f = [=](double t) {
    const double v = a + b * t;
    return v * v * std::exp(-rate * t);
  };
  return integrate_adaptive(f, split_by_exponent(lo, hi, 0.0, -rate, 0.0), q);
}

double line_weighted_square(const LineFunction& w, double rate,
                            const QuadratureSpec& q) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < w.t.size(); ++i) {
    if (w.w[i] == 0.0 && w.w[i + 1] == 0.0) continue;
    const double b = (w.w[i + 1] - w.w[i]) / (w.t[i + 1] - w.t[i]);
    const double a = w.w[i] - b * w.t[i];
    total += line_square_piece(a, b, w.t[i], w.t[i + 1], rate, q).value;
  }
  const double wm = w.w.back();
  if (wm != 0.0) total += wm * wm * std::exp(-rate * w.t.back()) / rate;
  return total;
}

// int (e^{coeff w(t)^2} - 1) e^{-rate t} over the line, plateau tail closed form
double line_exp_functional(const LineFunction& w, double coeff, double rate,
                           const QuadratureSpec& q, bool* capped) {
  double total = 0.0;
  auto eval = [&](double a, double b, double t) {
    const double v = a + b * t;
    const double e = coeff * v * v;
    double phi = e - rate * t;
    if (phi > 700.0) {
      *capped = true;
      phi = 700.0;
    }
    return std::exp(phi) * (-std::expm1(-e));
  };
  for (size_t i = 0; i + 1 < w.t.size(); ++i) {
    if (w.w[i] == 0.0 && w.w[i + 1] == 0.0) continue;
    const double b = (w.w[i + 1] - w.w[i]) / (w.t[i + 1] - w.t[i]);
    const double a = w.w[i] - b * w.t[i];
    auto f = [&, a, b](double t) { return eval(a, b, t); };
    total += integrate_adaptive(
                 f,
                 split_by_exponent(w.t[i], w.t[i + 1], coeff * b * b,
                                   2.0 * coeff * a * b - rate, coeff * a * a),
                 q)
                 .value;
  }
  const double wm = w.w.back();
  if (wm != 0.0) {
    const double e = coeff * wm * wm;
    double phi = e - rate * w.t.back();
    if (phi > 700.0) {
      *capped = true;
      phi = 700.0;
    }
    total += std::exp(phi) * (-std::expm1(-e)) / rate;
  }
  return total;
}

double rel_mismatch(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

double ProbeReport::max_measured() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::max(m, r.measured);
  return m;
}

LogRadialFunction moser_function(const Dimension& dim, double k) {
  if (!(k > 0)) throw std::invalid_argument("moser_function: k must be positive");
  const double top = std::sqrt(2.0 * dim.n * k / dim.gamma);
  return LogRadialFunction(dim, {0.0, k}, {0.0, top});
}

double LineFunction::value(double x) const {
  if (x < t.front()) return 0.0;
  if (x >= t.back()) return w.back();
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const size_t i = static_cast<size_t>(it - t.begin()) - 1;
  const double u = (x - t[i]) / (t[i + 1] - t[i]);
  return w[i] + u * (w[i + 1] - w[i]);
}

double LineFunction::derivative_l2_sq() const {
  double sum = 0.0;
  for (size_t i = 0; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i];
    const double b = (w[i + 1] - w[i]) / dt;
    sum += b * b * dt;
  }
  return sum;
}

bool LineFunction::is_zero() const {
  return std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; });
}

double least_squares_slope(std::span<const double> xs,
                           std::span<const double> ys, double* intercept) {
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double d = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / d;
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

ProbeReport adams_sup_probe(std::span<const LogRadialFunction> corpus,
                            double gamma, const QuadratureSpec& q, int threads,
                            int moser_k_lo, int moser_k_hi) {
  if (corpus.empty()) throw std::invalid_argument("adams_sup_probe: empty corpus");
  const Dimension dim = corpus.front().dim();
  ProbeReport rep;
  rep.name = "adams_sup_probe";
  rep.params = {{"gamma", gamma}, {"gamma_over_sharp", gamma / dim.gamma}};

  rep.rows.resize(corpus.size());
  parallel_for(corpus.size(), threads, [&](size_t i) {
    const NormReport nr = h_norm(corpus[i], q);
    const LogRadialFunction u =
        nr.h_norm > 1.0 ? corpus[i].scaled(1.0 / nr.h_norm) : corpus[i];
    const ExpFunctionalValue fv = exp_functional(u, gamma, q);
    ProbeRow row;
    row.label = "member_" + std::to_string(i);
    row.measured = fv.value;
    row.pass = !fv.precision_loss;
    if (fv.precision_loss) row.note = "overflow-capped";
    if (nr.h_norm > 1.0) row.note += " renormalized";
    rep.rows[i] = row;
  });

  if (gamma > dim.gamma) {
    std::vector<double> ks, logs;
    for (int k = moser_k_lo; k <= moser_k_hi; ++k) {
      const LogRadialFunction fk = moser_function(dim, k);
      const double h = h_norm(fk, q).h_norm;
      const ExpFunctionalValue fv = exp_functional(fk.scaled(1.0 / h), gamma, q);
      ProbeRow row;
      row.label = "moser_k_" + std::to_string(k);
      row.measured = fv.value;
      row.pass = !fv.precision_loss;
      if (fv.precision_loss) row.note = "overflow-capped";
      rep.rows.push_back(row);
      ks.push_back(k);
      logs.push_back(std::log(fv.value));
    }
    rep.log_slope = least_squares_slope(ks, logs, &rep.intercept);
    rep.slope_target = 2.0 * dim.n * (gamma - dim.gamma) / dim.gamma;
  }

  for (const auto& r : rep.rows) rep.pass = rep.pass && r.pass;
  return rep;
}

ProbeReport exterior_series_bound(const LogRadialFunction& f, double r_0,
                                  double gamma, const QuadratureSpec& q) {
  if (!(r_0 > 0)) throw std::invalid_argument("exterior_series_bound: r_0 > 0");
  const NormReport nr = h_norm(f, q);
  if (nr.h_norm > 1.0 + 1e-9) {
    throw std::invalid_argument(
        "exterior_series_bound: precondition h_norm(f) <= 1 violated (h_norm = " +
        std::to_string(nr.h_norm) + ")");
  }
  const Dimension& d = f.dim();
  const double s_r0 = -std::log(r_0);
  const ExpFunctionalValue i2 =
      exp_functional_window(f, gamma, q,
                            -std::numeric_limits<double>::infinity(), s_r0);

  // gamma ||u||_2^2 + (2 pi^N/(N-1)!) r_0^{2N}/(2(N-1)) sum_{k>=2} q^k/k!
  // with q = gamma ((N-1)!/pi^N) ||u||_{H^1}^2 / r_0^{2N-1}
  const double h1_sq = nr.l2 * nr.l2 + nr.grad_l2 * nr.grad_l2;
  const double qhat =
      gamma * (2.0 / d.sphere_area) * h1_sq / std::pow(r_0, 2.0 * d.n - 1.0);
  ProbeReport rep;
  rep.name = "exterior_series_bound";
  rep.params = {{"r_0", r_0}, {"gamma", gamma}, {"q_series", qhat}};

  double bound;
  if (qhat > 700.0) {
    bound = std::numeric_limits<double>::infinity();
    rep.note = "series bound overflow: r_0 too small for this gamma";
  } else {
    const double tail_sum = std::expm1(qhat) - qhat;  // sum_{k>=2} q^k/k!
    bound = gamma * nr.l2 * nr.l2 +
            d.sphere_area * std::pow(r_0, 2.0 * d.n) / (2.0 * (d.n - 1.0)) *
                tail_sum;
  }

  ProbeRow row;
  row.label = "I2_vs_series_bound";
  row.measured = i2.value;
  row.bound = bound;
  row.margin = bound - i2.value;
  row.pass = i2.value <= bound * (1.0 + 1e-9) + q.abs_tol;
  rep.rows.push_back(row);
  rep.pass = row.pass;
  return rep;
}

AuxTransformResult auxiliary_w_transform(const LogRadialFunction& f, double r_0,
                                         const QuadratureSpec& q) {
  const Dimension& d = f.dim();
  const double admissibility = 0.5 * d.sphere_area * std::pow(r_0, 2.0 * d.n - 1.0);
  if (admissibility < 1.0) {
    throw std::invalid_argument(
        "auxiliary_w_transform: admissibility condition pi^N r_0^{2N-1}/(N-1)! >= 1 "
        "violated (value = " +
        std::to_string(admissibility) + ")");
  }

  ProbeReport rep;
  rep.name = "auxiliary_w_transform";

  NormReport nr = h_norm(f, q);
  LogRadialFunction u = f;
  if (nr.h_norm > 1.0) {
    u = f.scaled(1.0 / nr.h_norm);
    nr = h_norm(u, q);
    rep.note = "input renormalized to unit h_norm";
  }

  const double s_r0 = -std::log(r_0);
  const double u_r0 = u.value(s_r0);
  const double h1_sq = nr.l2 * nr.l2 + nr.grad_l2 * nr.grad_l2;
  const double c = (2.0 / d.sphere_area) * h1_sq / std::pow(r_0, 2.0 * d.n - 1.0);
  const double amplification = std::sqrt(1.0 + c);
  const double domination_const = 1.0 + c;

  std::vector<double> ws = {s_r0}, wv = {0.0};
  for (size_t i = 0; i < u.size(); ++i) {
    if (u.breakpoints()[i] > s_r0) {
      ws.push_back(u.breakpoints()[i]);
      wv.push_back((u.values()[i] - u_r0) * amplification);
    }
  }
  if (ws.size() < 2) {
    // r_0 inside the plateau: u - u(r_0) vanishes identically there
    ws.push_back(s_r0 + 1.0);
    wv.push_back(0.0);
  }
  LogRadialFunction w(d, std::move(ws), std::move(wv));

  ProbeRow hrow;
  hrow.label = "hardy_gradient(w)";
  hrow.measured = hardy_gradient_norm(w);
  hrow.bound = 1.0;
  hrow.margin = hrow.bound - hrow.measured;
  hrow.pass = hrow.measured <= 1.0 + 1e-9;
  rep.rows.push_back(hrow);

  ProbeRow drow;
  drow.label = "domination u^2 <= w^2 + d(r_0)";
  drow.bound = domination_const;
  double min_slack = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < w.size(); ++i) {
    const double s = w.breakpoints()[i];
    const double uu = u.value(s);
    min_slack = std::min(
        min_slack, w.values()[i] * w.values()[i] + domination_const - uu * uu);
  }
  drow.measured = min_slack;
  drow.margin = min_slack;
  drow.pass = min_slack >= -q.abs_tol;
  rep.rows.push_back(drow);

  rep.params = {{"r_0", r_0},
                {"admissibility", admissibility},
                {"d_r0", domination_const},
                {"amplification", amplification}};
  rep.pass = hrow.pass && drow.pass;
  return {std::move(w), std::move(rep)};
}

ProbeReport ball_to_2d_reduction(const LogRadialFunction& f,
                                 const QuadratureSpec& q) {
  const Dimension& d = f.dim();
  const double N = d.n;
  const double gamma = d.gamma;
  bool capped = false;

  // side A: omega * int e^{gamma v^2} e^{-2Ns} ds (plateau tail closed form)
  double side_a = 0.0;
  {
    const auto& s = f.breakpoints();
    const auto& v = f.values();
    for (size_t i = 0; i + 1 < s.size(); ++i) {
      const double b = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
      const double a = v[i] - b * s[i];
      auto integrand = [&, a, b](double t) {
        const double vv = a + b * t;
        double phi = gamma * vv * vv - 2.0 * N * t;
        if (phi > 700.0) {
          capped = true;
          phi = 700.0;
        }
        return std::exp(phi);
      };
      side_a += integrate_adaptive(
                    integrand,
                    split_by_exponent(s[i], s[i + 1], gamma * b * b,
                                      2.0 * gamma * a * b - 2.0 * N,
                                      gamma * a * a),
                    q)
                    .value;
    }
    const double vm = f.plateau_value();
    side_a += std::exp(gamma * vm * vm - 2.0 * N * f.plateau_start()) / (2.0 * N);
    side_a *= d.sphere_area;
  }

  // side B after sigma = r^N: (2 pi^N/N!) int e^{4 pi W^2} e^{-2t} dt with
  // t = N s and W(t) = sqrt(N omega/(2 pi)) v(t/N)
  double side_b = 0.0;
  const double c_w = std::sqrt(N * d.sphere_area / (2.0 * std::acos(-1.0)));
  const double four_pi = 4.0 * std::acos(-1.0);
  LineFunction W;
  for (size_t i = 0; i < f.size(); ++i) {
    W.t.push_back(N * f.breakpoints()[i]);
    W.w.push_back(c_w * f.values()[i]);
  }
  {
    for (size_t i = 0; i + 1 < W.t.size(); ++i) {
      const double b = (W.w[i + 1] - W.w[i]) / (W.t[i + 1] - W.t[i]);
      const double a = W.w[i] - b * W.t[i];
      auto integrand = [&, a, b](double t) {
        const double vv = a + b * t;
        double phi = four_pi * vv * vv - 2.0 * t;
        if (phi > 700.0) {
          capped = true;
          phi = 700.0;
        }
        return std::exp(phi);
      };
      side_b += integrate_adaptive(
                    integrand,
                    split_by_exponent(W.t[i], W.t[i + 1], four_pi * b * b,
                                      2.0 * four_pi * a * b - 2.0,
                                      four_pi * a * a),
                    q)
                    .value;
    }
    const double wm = W.w.back();
    side_b += std::exp(four_pi * wm * wm - 2.0 * W.t.back()) / 2.0;
    side_b *= 2.0 * d.ball_volume;  // 2 pi^N / N!
  }

  // gradient identity: omega int v'^2 r dr == 2 pi int W'^2 sigma dsigma,
  // both exact in their own coordinates
  const double grad_a = hardy_gradient_norm(f);
  const double grad_b =
      std::sqrt(2.0 * std::acos(-1.0) * W.derivative_l2_sq());

  ProbeReport rep;
  rep.name = "ball_to_2d_reduction";
  rep.params = {{"support_radius", std::exp(-f.support_start())}};
  ProbeRow r1;
  r1.label = "exp_identity";
  r1.measured = side_a;
  r1.bound = side_b;
  r1.margin = rel_mismatch(side_a, side_b);
  r1.pass = r1.margin <= 1e-6 && !capped;
  if (capped) r1.note = "overflow-capped";
  rep.rows.push_back(r1);
  ProbeRow r2;
  r2.label = "gradient_identity";
  r2.measured = grad_a;
  r2.bound = grad_b;
  r2.margin = rel_mismatch(grad_a, grad_b);
  r2.pass = r2.margin <= 1e-6;
  rep.rows.push_back(r2);
  rep.pass = r1.pass && r2.pass;
  return rep;
}

HalfLogResult half_log_transform(const LogRadialFunction& f, double gamma_check,
                                 const QuadratureSpec& q) {
  const Dimension& d = f.dim();
  if (!f.is_nonnegative()) {
    throw std::invalid_argument("half_log_transform: f must be nonnegative");
  }
  if (!f.is_radially_nonincreasing()) {
    throw std::invalid_argument(
        "half_log_transform: f must be radially nonincreasing");
  }
  if (!f.is_continuous()) {
    throw std::invalid_argument(
        "half_log_transform: f must be compactly supported with v(s_0) = 0");
  }
  const double hardy = hardy_gradient_norm(f);
  if (hardy > 1.0 + 1e-9) {
    throw std::invalid_argument(
        "half_log_transform: Hardy-gradient norm must be <= 1 (got " +
        std::to_string(hardy) + ")");
  }

  // w(t) = sqrt(gamma_N) v(t/2): breakpoints double, values scale
  LineFunction w;
  const double amp = std::sqrt(d.gamma);
  for (size_t i = 0; i < f.size(); ++i) {
    w.t.push_back(2.0 * f.breakpoints()[i]);
    w.w.push_back(amp * f.values()[i]);
  }

  ProbeReport rep;
  rep.name = "half_log_transform";
  rep.params = {{"gamma_check", gamma_check}};

  const double N = d.n;
  // (w4): ||w'|| = sqrt(N) ||grad u / |x|^{N-1}||
  {
    ProbeRow r;
    r.label = "w4_derivative";
    r.measured = std::sqrt(w.derivative_l2_sq());
    r.bound = std::sqrt(N) * hardy;
    r.margin = rel_mismatch(r.measured, r.bound);
    r.pass = r.margin <= kIdentityTol;
    rep.rows.push_back(r);
  }
  // (w5): int w^2 e^{-Nt} dt = 4N ||u||_2^2
  {
    ProbeRow r;
    r.label = "w5_mass";
    r.measured = line_weighted_square(w, N, q);
    r.bound = 4.0 * N * l2_norm_sq_detail(f, q).value;
    r.margin = rel_mismatch(r.measured, r.bound);
    r.pass = r.margin <= kIdentityTol;
    rep.rows.push_back(r);
  }
  // (w6): int (e^{(gamma/gamma_N) w^2} - 1) e^{-Nt} dt
  //        = ((N-1)!/pi^N) int (e^{gamma u^2} - 1) dx
  {
    bool capped = false;
    ProbeRow r;
    r.label = "w6_exponential";
    r.measured = line_exp_functional(w, gamma_check / d.gamma, N, q, &capped);
    r.bound =
        (2.0 / d.sphere_area) * exp_functional(f, gamma_check, q).value;
    r.margin = rel_mismatch(r.measured, r.bound);
    r.pass = r.margin <= kIdentityTol && !capped;
    if (capped) r.note = "overflow-capped";
    rep.rows.push_back(r);
  }
  for (const auto& r : rep.rows) rep.pass = rep.pass && r.pass;
  return {std::move(w), std::move(rep)};
}

ProbeReport adachi_ratio_probe(std::span<const LogRadialFunction> corpus,
                               double gamma, const QuadratureSpec& q,
                               int threads) {
  if (corpus.empty()) throw std::invalid_argument("adachi_ratio_probe: empty corpus");
  const Dimension dim = corpus.front().dim();
  ProbeReport rep;
  rep.name = "adachi_ratio_probe";
  rep.params = {{"gamma", gamma}, {"gamma_over_sharp", gamma / dim.gamma}};

  rep.rows.resize(corpus.size());
  parallel_for(corpus.size(), threads, [&](size_t i) {
    const LogRadialFunction& u = corpus[i];
    ProbeRow row;
    row.label = "member_" + std::to_string(i);
    if (u.is_zero()) {
      row.note = "skipped: zero function (zero denominator)";
      rep.rows[i] = row;
      return;
    }
    if (!u.is_nonnegative() || !u.is_radially_nonincreasing() ||
        !u.is_continuous() || hardy_gradient_norm(u) > 1.0 + 1e-9) {
      row.note = "skipped: inadmissible for the subcritical inequality";
      rep.rows[i] = row;
      return;
    }
    const double l2sq = l2_norm_sq_detail(u, q).value;
    const ExpFunctionalValue fv = exp_functional(u, gamma, q);
    row.measured = fv.value / l2sq;
    row.pass = !fv.precision_loss;
    if (fv.precision_loss) row.note = "overflow-capped";
    rep.rows[i] = row;
  });
  for (const auto& r : rep.rows) rep.pass = rep.pass && r.pass;
  return rep;
}

std::vector<MoserWitnessRow> moser_sharpness_series(const Dimension& dim,
                                                    std::span<const int> ks,
                                                    const QuadratureSpec& q) {
  std::vector<MoserWitnessRow> out;
  out.reserve(ks.size());
  for (int k : ks) {
    const LogRadialFunction fk = moser_function(dim, k);
    MoserWitnessRow row;
    row.k = k;
    row.full = exp_functional(fk, dim.gamma, q).value;
    row.core = exp_functional_window(fk, dim.gamma, q, k).value;
    row.envelope =
        dim.ball_volume * (-std::expm1(-2.0 * dim.n * static_cast<double>(k)));
    row.l2 = l2_norm(fk, q);
    row.ratio = row.full / (row.l2 * row.l2);
    out.push_back(row);
  }
  return out;
}

ProbeReport one_d_reduced_check(const LineFunction& w, const Dimension& dim,
                                double beta, double eps,
                                const QuadratureSpec& q) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("one_d_reduced_check: beta must be in (0,1)");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("one_d_reduced_check: eps must be positive");
  }
  if (!(beta * (1.0 + eps) < 1.0)) {
    throw std::invalid_argument(
        "one_d_reduced_check: precondition beta(1+eps) < 1 violated");
  }
  const double N = dim.n;
  for (size_t i = 0; i < w.w.size(); ++i) {
    if (w.w[i] < 0.0) {
      throw std::invalid_argument("one_d_reduced_check: w must be nonnegative");
    }
    if (i > 0 && w.w[i] < w.w[i - 1]) {
      throw std::invalid_argument("one_d_reduced_check: w must be nondecreasing");
    }
  }
  if (w.w.front() != 0.0) {
    throw std::invalid_argument(
        "one_d_reduced_check: w must vanish left of its first breakpoint");
  }
  const double wprime = std::sqrt(w.derivative_l2_sq());
  if (wprime > std::sqrt(N) * (1.0 + 1e-9)) {
    throw std::invalid_argument(
        "one_d_reduced_check: ||w'||_{L^2} <= sqrt(N) violated");
  }

  // smallest M with e^x - 1 <= M x on [0,1]; smallest C_eps with
  // 1 + sqrt(s) <= sqrt((1+eps)s + C_eps)
  const double M = std::exp(1.0) - 1.0;
  const double c_eps = 1.0 + 1.0 / eps;
  const double c_beta = std::max(
      M * beta, std::exp(beta * c_eps) / (1.0 - beta * (1.0 + eps)));

  bool capped = false;
  const double lhs = w.is_zero() ? 0.0 : line_exp_functional(w, beta, N, q, &capped);
  const double rhs = w.is_zero() ? 0.0 : line_weighted_square(w, N, q);

  ProbeReport rep;
  rep.name = "one_d_reduced_check";
  rep.params = {{"beta", beta}, {"eps", eps}, {"C_beta", c_beta},
                {"M", M},       {"C_eps", c_eps}};
  ProbeRow r;
  r.label = "reduced_inequality";
  r.measured = lhs;
  r.bound = c_beta * rhs;
  r.margin = r.bound - lhs;
  r.pass = lhs <= r.bound * (1.0 + 1e-9) + q.abs_tol && !capped;
  if (capped) r.note = "overflow-capped";
  rep.rows.push_back(r);
  rep.pass = r.pass;
  return rep;
}

}  // namespace hadams
