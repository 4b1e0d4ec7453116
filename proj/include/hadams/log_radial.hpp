#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hadams/dimension.hpp"

namespace hadams {

// A radial function u on R^{2N} stored in log coordinates s = -log|x| as the
// piecewise-linear v(s) = u(e^{-s}) on a strictly increasing breakpoint grid.
// Extension rules:
//   v == 0        for s <  s_0   (u has compact support, u = 0 for |x| >= e^{-s_0})
//   v == v_m      for s >  s_m   (constant plateau as |x| -> 0)
//
// The represented u is continuous away from the support boundary; it is
// continuous everywhere on R^{2N}\{0} iff v_0 == 0.  Step functions such as
// c*1_{B(R)} are represented exactly by taking v_0 = c (a jump at the support
// boundary, a null set for every integral here).
class LogRadialFunction {
 public:
  LogRadialFunction(Dimension dim, std::vector<double> breakpoints,
                    std::vector<double> values);

  const Dimension& dim() const { return dim_; }
  const std::vector<double>& breakpoints() const { return s_; }
  const std::vector<double>& values() const { return v_; }
  size_t size() const { return s_.size(); }

  double support_start() const { return s_.front(); }
  double plateau_start() const { return s_.back(); }
  double plateau_value() const { return v_.back(); }

  // v(s) with both extension rules applied
  double value(double s) const;
  // slope of the linear piece containing s (0 on both tails; right-continuous
  // at breakpoints)
  double slope(double s) const;

  bool is_zero() const;
  double max_abs_value() const;
  bool is_continuous() const { return v_.front() == 0.0; }
  bool is_nonnegative() const;
  // u nonincreasing in r  <=>  v nondecreasing in s
  bool is_radially_nonincreasing() const;

  LogRadialFunction scaled(double c) const;

 private:
  Dimension dim_;
  std::vector<double> s_;
  std::vector<double> v_;
};

// Pointwise combination a + sign*b on the merged breakpoint grid.  Both
// extension rules are honored exactly (the sum/difference of two plateaus is
// again a plateau).
LogRadialFunction combine(const LogRadialFunction& a, const LogRadialFunction& b,
                          double sign);

// --- serialization -----------------------------------------------------------
//
// Two-column text block with a header carrying N and the extension rules;
// every value printed with 17 significant digits so the round trip is
// bit-exact.
//
//   # logradial v1 N 2 left zero right plateau
//   0.0000000000000000e+00 0.0000000000000000e+00
//   ...

void write_logradial(std::ostream& os, const LogRadialFunction& f);
LogRadialFunction read_logradial(std::istream& is);
void save_logradial(const std::string& path, const LogRadialFunction& f);
LogRadialFunction load_logradial(const std::string& path);

}  // namespace hadams
