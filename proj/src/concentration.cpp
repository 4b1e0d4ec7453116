#include "hadams/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hadams {

Profile::Profile(std::vector<double> y, std::vector<double> psi)
    : y_(std::move(y)), psi_(std::move(psi)) {
  if (y_.size() != psi_.size() || y_.size() < 2) {
    throw std::invalid_argument("Profile: need matching arrays with >= 2 points");
  }
  if (y_.front() != 0.0 || psi_.front() != 0.0) {
    throw std::invalid_argument("Profile: must start at (0, 0) and vanish on (-inf, 0]");
  }
  bool nonzero = false;
  for (size_t i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(y_[i]) || !std::isfinite(psi_[i])) {
      throw std::invalid_argument("Profile: non-finite entry");
    }
    if (i > 0 && !(y_[i] > y_[i - 1])) {
      throw std::invalid_argument("Profile: breakpoints must be strictly increasing");
    }
    nonzero = nonzero || psi_[i] != 0.0;
  }
  if (!nonzero) throw std::invalid_argument("Profile: identically zero");
}

double Profile::value(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= y_.back()) return psi_.back();
  const auto it = std::upper_bound(y_.begin(), y_.end(), y);
  const size_t i = static_cast<size_t>(it - y_.begin()) - 1;
  const double t = (y - y_[i]) / (y_[i + 1] - y_[i]);
  return psi_[i] + t * (psi_[i + 1] - psi_[i]);
}

double Profile::derivative_l2() const {
  double sum = 0.0;
  for (size_t i = 0; i + 1 < y_.size(); ++i) {
    const double dy = y_[i + 1] - y_[i];
    const double b = (psi_[i + 1] - psi_[i]) / dy;
    sum += b * b * dy;
  }
  return std::sqrt(sum);
}

ScaleSequence::ScaleSequence(std::vector<long long> indices,
                             std::vector<double> alpha)
    : idx_(std::move(indices)), alpha_(std::move(alpha)) {
  if (idx_.size() != alpha_.size() || idx_.empty()) {
    throw std::invalid_argument("ScaleSequence: need matching nonempty arrays");
  }
  for (size_t i = 0; i < idx_.size(); ++i) {
    if (!(alpha_[i] > 0) || !std::isfinite(alpha_[i])) {
      throw std::invalid_argument("ScaleSequence: alpha must be positive and finite");
    }
    if (i > 0 && (idx_[i] <= idx_[i - 1] || alpha_[i] <= alpha_[i - 1])) {
      throw std::invalid_argument(
          "ScaleSequence: indices and alpha must be strictly increasing");
    }
  }
}

ScaleSequence ScaleSequence::power_law(std::vector<long long> indices, double p) {
  std::vector<double> a;
  a.reserve(indices.size());
  for (long long n : indices) a.push_back(std::pow(static_cast<double>(n), p));
  return ScaleSequence(std::move(indices), std::move(a));
}

ScaleSequence ScaleSequence::linear_log(std::vector<long long> indices) {
  std::vector<double> a;
  a.reserve(indices.size());
  for (long long n : indices) {
    if (n < 2) {
      throw std::invalid_argument("ScaleSequence::linear_log: indices must be >= 2");
    }
    a.push_back(static_cast<double>(n) * std::log(static_cast<double>(n)));
  }
  return ScaleSequence(std::move(indices), std::move(a));
}

double ScaleSequence::alpha_at(long long n) const {
  const auto it = std::lower_bound(idx_.begin(), idx_.end(), n);
  if (it == idx_.end() || *it != n) {
    throw std::invalid_argument("ScaleSequence: index " + std::to_string(n) +
                                " not in the index set");
  }
  return alpha_[static_cast<size_t>(it - idx_.begin())];
}

bool ScaleSequence::contains(long long n) const {
  return std::binary_search(idx_.begin(), idx_.end(), n);
}

Profile moser_profile() { return Profile({0.0, 1.0}, {0.0, 1.0}); }

LogRadialFunction build_concentration(const ConcentrationFamily& fam,
                                      long long n) {
  const double alpha = fam.scale.alpha_at(n);
  const double amp = std::sqrt(2.0 * fam.dim.n * alpha / fam.dim.gamma);
  std::vector<double> s, v;
  s.reserve(fam.profile.breakpoints().size());
  v.reserve(s.capacity());
  for (size_t i = 0; i < fam.profile.breakpoints().size(); ++i) {
    s.push_back(alpha * fam.profile.breakpoints()[i]);
    v.push_back(amp * fam.profile.values()[i]);
  }
  return LogRadialFunction(fam.dim, std::move(s), std::move(v));
}

SqrtRatioMax profile_sqrt_ratio_max(const Profile& psi) {
  const auto& y = psi.breakpoints();
  const auto& p = psi.values();
  SqrtRatioMax best;

  auto consider = [&best](double s, double val, bool at_last) {
    if (s <= 0.0) return;
    const double r = std::abs(val) / std::sqrt(s);
    if (r > best.value) {
      best.value = r;
      best.arg = s;
      best.attained_at_boundary = at_last;
    }
  };

  for (size_t i = 0; i + 1 < y.size(); ++i) {
    const double slope = (p[i + 1] - p[i]) / (y[i + 1] - y[i]);
    const double a = p[i] - slope * y[i];  // psi = a + slope*s on the segment
    consider(y[i], p[i], false);
    consider(y[i + 1], p[i + 1], i + 2 == y.size());
    // interior extremum of (a+bs)/sqrt(s) at s = a/b
    if (slope != 0.0) {
      const double s_star = a / slope;
      if (s_star > y[i] && s_star < y[i + 1]) {
        consider(s_star, a + slope * s_star, false);
      }
    }
  }
  // plateau: |psi_M|/sqrt(s) decreases, so nothing beats s = y_M
  return best;
}

double asymptotic_orlicz_limit(const Profile& psi, const Dimension& dim) {
  return profile_sqrt_ratio_max(psi).value / std::sqrt(dim.gamma);
}

ConcentrationIntegral concentration_orlicz_integral(const Profile& psi,
                                                    double alpha, double lambda,
                                                    const Dimension& dim,
                                                    const QuadratureSpec& q) {
  if (!(alpha > 0) || !(lambda > 0)) {
    throw std::invalid_argument("concentration_orlicz_integral: alpha, lambda > 0");
  }
  const double rate = dim.volume_rate() * alpha;        // 2N alpha
  const double g = rate / (dim.gamma * lambda * lambda);  // 2N alpha/(gamma lambda^2)

  ConcentrationIntegral out;
  out.divergent = lambda < asymptotic_orlicz_limit(psi, dim);
  bool capped = false;
  const double cap = 700.0;

  // difference form: int e^{-2N alpha s} (e^{g psi(s)^2} - 1) ds, segment by
  // segment; the 1/sqrt(s) factor of the identity never appears explicitly
  const auto& y = psi.breakpoints();
  const auto& p = psi.values();
  for (size_t i = 0; i + 1 < y.size(); ++i) {
    if (p[i] == 0.0 && p[i + 1] == 0.0) continue;
    const double b = (p[i + 1] - p[i]) / (y[i + 1] - y[i]);
    const double a = p[i] - b * y[i];
    auto integrand = [&](double s) {
      const double v = a + b * s;
      const double e = g * v * v;
      const double phi = e - rate * s;
      const double x = phi > cap ? (capped = true, cap) : phi;
      return std::exp(x) * (-std::expm1(-e));
    };
    QuadratureResult r = integrate_adaptive(
        integrand,
        split_by_exponent(y[i], y[i + 1], g * b * b, 2.0 * g * a * b - rate,
                          g * a * a),
        q);
    out.value += r.value;
    out.abs_error += r.abs_error;
  }
  const double pm = psi.plateau_value();
  if (pm != 0.0) {
    const double e = g * pm * pm;
    const double phi = e - rate * psi.plateau_start();
    const double x = phi > cap ? (capped = true, cap) : phi;
    const double tail = std::exp(x) * (-std::expm1(-e)) / rate;
    out.value += tail;
    out.abs_error += std::abs(tail) * 1e-15;
  }

  out.value *= dim.sphere_area * alpha;
  out.abs_error *= dim.sphere_area * alpha;
  out.precision_loss = capped;
  return out;
}

LogRadialFunction superpose(std::span<const ConcentrationFamily> families,
                            long long n) {
  if (families.empty()) {
    throw std::invalid_argument("superpose: empty family list");
  }
  for (const auto& fam : families) {
    if (fam.dim.n != families.front().dim.n) {
      throw std::invalid_argument("superpose: families must share the dimension");
    }
  }
  LogRadialFunction sum = build_concentration(families.front(), n);
  for (size_t j = 1; j < families.size(); ++j) {
    sum = combine(sum, build_concentration(families[j], n), +1.0);
  }
  return sum;
}

void write_profile(std::ostream& os, const Profile& p) {
  os << "# profile v1\n";
  char buf[64];
  for (size_t i = 0; i < p.breakpoints().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.16e %.16e\n", p.breakpoints()[i],
                  p.values()[i]);
    os << buf;
  }
}

Profile read_profile(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != "# profile v1") {
    throw std::invalid_argument("read_profile: bad header");
  }
  std::vector<double> y, psi;
  double a, b;
  while (is >> a >> b) {
    y.push_back(a);
    psi.push_back(b);
  }
  return Profile(std::move(y), std::move(psi));
}

void save_profile(const std::string& path, const Profile& p) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_profile: cannot open " + path);
  write_profile(os, p);
}

Profile load_profile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_profile: cannot open " + path);
  return read_profile(is);
}

void write_scale(std::ostream& os, const ScaleSequence& s) {
  os << "# scale v1\n";
  char buf[64];
  for (size_t i = 0; i < s.indices().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld %.16e\n",
                  static_cast<long long>(s.indices()[i]), s.alphas()[i]);
    os << buf;
  }
}

ScaleSequence read_scale(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != "# scale v1") {
    throw std::invalid_argument("read_scale: bad header");
  }
  std::vector<long long> idx;
  std::vector<double> alpha;
  long long n;
  double a;
  while (is >> n >> a) {
    idx.push_back(n);
    alpha.push_back(a);
  }
  return ScaleSequence(std::move(idx), std::move(alpha));
}

OrthogonalityReport scale_orthogonality(const ScaleSequence& a,
                                        const ScaleSequence& b, double bar) {
  OrthogonalityReport rep;
  rep.bar = bar;
  for (size_t i = 0; i < a.indices().size(); ++i) {
    const long long n = a.indices()[i];
    if (!b.contains(n)) continue;
    rep.indices.push_back(n);
    rep.statistic.push_back(std::abs(std::log(b.alpha_at(n) / a.alphas()[i])));
  }
  if (rep.indices.empty()) {
    throw std::invalid_argument("scale_orthogonality: no shared indices");
  }
  rep.increasing_tail = true;
  const size_t half = rep.statistic.size() / 2;
  for (size_t i = half; i + 1 < rep.statistic.size(); ++i) {
    if (!(rep.statistic[i + 1] > rep.statistic[i] + 1e-14)) {
      rep.increasing_tail = false;
      break;
    }
  }
  rep.margin = rep.statistic.back() - bar;
  rep.orthogonal = rep.increasing_tail && rep.margin >= 0.0;
  return rep;
}

}  // namespace hadams
