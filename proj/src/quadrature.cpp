#include "hadams/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace hadams {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) {
    throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
  }
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule,
// on [-1, 1].  Standard QUADPACK constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Piece {
  double a, b;
  double value;
  double error;
};

Piece evaluate_gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(center - half * kXgk[j]);
    fv[14 - j] = f(center + half * kXgk[j]);
  }
  fv[7] = f(center);

  double result_kronrod = kWgk[7] * fv[7];
  double result_gauss = kWg[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    result_kronrod += kWgk[j] * (fv[j] + fv[14 - j]);
    if (j % 2 == 1) {
      result_gauss += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
  }
  const double value = result_kronrod * half;
  double err = std::abs((result_kronrod - result_gauss) * half);
  // QUADPACK-style sharpening of the raw difference
  if (err > 0) {
    double resasc = 0.0;
    const double mean = result_kronrod * 0.5;
    for (int j = 0; j < 7; ++j) {
      resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    }
    resasc += kWgk[7] * std::abs(fv[7] - mean);
    resasc *= std::abs(half);
    if (resasc > 0 && err < resasc) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
  }
  return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::vector<std::pair<double, double>> pieces,
                                    const QuadratureSpec& spec) {
  spec.validate();
  QuadratureResult out;
  if (pieces.empty()) return out;

  auto cmp = [](const Piece& x, const Piece& y) { return x.error < y.error; };
  std::priority_queue<Piece, std::vector<Piece>, decltype(cmp)> heap(cmp);

  double total = 0.0, err = 0.0;
  for (const auto& [a, b] : pieces) {
    if (!(b > a)) continue;
    Piece p = evaluate_gk15(f, a, b);
    total += p.value;
    err += p.error;
    heap.push(p);
  }

  int splits = 0;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) &&
         splits < spec.max_subdivisions && !heap.empty()) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval at floating-point resolution; cannot refine further
      heap.push({worst.a, worst.b, worst.value, 0.0});
      err -= worst.error;
      continue;
    }
    Piece left = evaluate_gk15(f, worst.a, mid);
    Piece right = evaluate_gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }

  out.value = total;
  out.abs_error = err;
  out.subdivisions = splits;
  out.converged =
      err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  if (!out.converged) {
    throw QuadratureError(
        "integrate_adaptive: tolerance not reached within max_subdivisions", out);
  }
  return out;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureSpec& spec) {
  return integrate_adaptive(f, {{a, b}}, spec);
}

std::vector<std::pair<double, double>> split_by_exponent(double a, double b,
                                                         double q2, double q1,
                                                         double q0,
                                                         double max_swing) {
  std::vector<std::pair<double, double>> out;
  if (!(b > a)) return out;

  auto phi = [&](double s) { return (q2 * s + q1) * s + q0; };

  std::vector<double> knots = {a, b};
  if (q2 != 0.0) {
    const double vertex = -q1 / (2.0 * q2);
    if (vertex > a && vertex < b) knots.insert(knots.begin() + 1, vertex);
  }

  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i], hi = knots[i + 1];
    const double swing = std::abs(phi(hi) - phi(lo));
    const int parts = std::max(1, static_cast<int>(std::ceil(swing / max_swing)));
    double prev = lo;
    for (int j = 1; j <= parts; ++j) {
      const double next = (j == parts) ? hi : lo + (hi - lo) * j / parts;
      const double top = std::max(phi(prev), phi(next));
      if (top > -745.0 && next > prev) out.emplace_back(prev, next);
      prev = next;
    }
  }
  if (out.empty()) out.emplace_back(a, b);  // fully underflowed: integral is 0
  return out;
}

}  // namespace hadams
