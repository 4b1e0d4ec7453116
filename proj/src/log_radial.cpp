#include "hadams/log_radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hadams {

LogRadialFunction::LogRadialFunction(Dimension dim,
                                     std::vector<double> breakpoints,
                                     std::vector<double> values)
    : dim_(dim), s_(std::move(breakpoints)), v_(std::move(values)) {
  if (s_.size() != v_.size()) {
    throw std::invalid_argument("LogRadialFunction: breakpoints/values size mismatch");
  }
  if (s_.size() < 2) {
    throw std::invalid_argument(
        "LogRadialFunction: need at least two breakpoints (no interval to integrate)");
  }
  for (size_t i = 0; i < s_.size(); ++i) {
    if (!std::isfinite(s_[i]) || !std::isfinite(v_[i])) {
      throw std::invalid_argument("LogRadialFunction: non-finite entry");
    }
    if (i > 0 && !(s_[i] > s_[i - 1])) {
      throw std::invalid_argument(
          "LogRadialFunction: breakpoints must be strictly increasing");
    }
  }
}

double LogRadialFunction::value(double s) const {
  if (s < s_.front()) return 0.0;
  if (s >= s_.back()) return v_.back();
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const size_t i = static_cast<size_t>(it - s_.begin()) - 1;
  if (s == s_[i]) return v_[i];
  const double t = (s - s_[i]) / (s_[i + 1] - s_[i]);
  return v_[i] + t * (v_[i + 1] - v_[i]);
}

double LogRadialFunction::slope(double s) const {
  if (s < s_.front() || s >= s_.back()) return 0.0;
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const size_t i = static_cast<size_t>(it - s_.begin()) - 1;
  return (v_[i + 1] - v_[i]) / (s_[i + 1] - s_[i]);
}

bool LogRadialFunction::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return x == 0.0; });
}

double LogRadialFunction::max_abs_value() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool LogRadialFunction::is_nonnegative() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return x >= 0.0; });
}

bool LogRadialFunction::is_radially_nonincreasing() const {
  if (v_.front() < 0) return false;  // jump down at the support boundary
  for (size_t i = 1; i < v_.size(); ++i) {
    if (v_[i] < v_[i - 1]) return false;
  }
  return true;
}

LogRadialFunction LogRadialFunction::scaled(double c) const {
  std::vector<double> w(v_);
  for (double& x : w) x *= c;
  return LogRadialFunction(dim_, s_, std::move(w));
}

LogRadialFunction combine(const LogRadialFunction& a, const LogRadialFunction& b,
                          double sign) {
  if (a.dim().n != b.dim().n) {
    throw std::invalid_argument("combine: dimension mismatch");
  }
  std::set<double> merged(a.breakpoints().begin(), a.breakpoints().end());
  merged.insert(b.breakpoints().begin(), b.breakpoints().end());
  std::vector<double> s(merged.begin(), merged.end());
  std::vector<double> v;
  v.reserve(s.size());
  for (double x : s) v.push_back(a.value(x) + sign * b.value(x));
  return LogRadialFunction(a.dim(), std::move(s), std::move(v));
}

void write_logradial(std::ostream& os, const LogRadialFunction& f) {
  os << "# logradial v1 N " << f.dim().n << " left zero right plateau\n";
  char buf[64];
  for (size_t i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.16e %.16e\n", f.breakpoints()[i],
                  f.values()[i]);
    os << buf;
  }
}

LogRadialFunction read_logradial(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) {
    throw std::invalid_argument("read_logradial: empty stream");
  }
  std::istringstream hs(header);
  std::string hash, tag, ver, nkey, lkey, lval, rkey, rval;
  int N = 0;
  hs >> hash >> tag >> ver >> nkey >> N >> lkey >> lval >> rkey >> rval;
  if (hash != "#" || tag != "logradial" || ver != "v1" || nkey != "N" ||
      lkey != "left" || lval != "zero" || rkey != "right" || rval != "plateau") {
    throw std::invalid_argument("read_logradial: bad header: " + header);
  }
  std::vector<double> s, v;
  double x, y;
  while (is >> x >> y) {
    s.push_back(x);
    v.push_back(y);
  }
  return LogRadialFunction(Dimension(N), std::move(s), std::move(v));
}

void save_logradial(const std::string& path, const LogRadialFunction& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_logradial: cannot open " + path);
  write_logradial(os, f);
}

LogRadialFunction load_logradial(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_logradial: cannot open " + path);
  return read_logradial(is);
}

}  // namespace hadams
