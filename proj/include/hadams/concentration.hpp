#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hadams/log_radial.hpp"
#include "hadams/orlicz.hpp"
#include "hadams/quadrature.hpp"

namespace hadams {

// An element of the profile set: psi piecewise linear with psi(0) = 0,
// psi == 0 on (-inf, 0], constant plateau after the last breakpoint, and
// square-integrable derivative (exact for this representation).
class Profile {
 public:
  Profile(std::vector<double> y, std::vector<double> psi);

  const std::vector<double>& breakpoints() const { return y_; }
  const std::vector<double>& values() const { return psi_; }
  double value(double y) const;
  double plateau_value() const { return psi_.back(); }
  double plateau_start() const { return y_.back(); }

  // ||psi'||_{L^2(R)}, exact (piecewise-constant derivative)
  double derivative_l2() const;

 private:
  std::vector<double> y_;
  std::vector<double> psi_;
};

// A scale: alpha(n) > 0 strictly increasing over a strictly increasing
// integer index set (finite stand-in for "going to infinity").
class ScaleSequence {
 public:
  ScaleSequence(std::vector<long long> indices, std::vector<double> alpha);

  static ScaleSequence power_law(std::vector<long long> indices, double p);
  static ScaleSequence linear_log(std::vector<long long> indices);

  const std::vector<long long>& indices() const { return idx_; }
  const std::vector<double>& alphas() const { return alpha_; }
  double alpha_at(long long n) const;  // throws if n not in the index set
  bool contains(long long n) const;

 private:
  std::vector<long long> idx_;
  std::vector<double> alpha_;
};

struct ConcentrationFamily {
  Profile profile;
  ScaleSequence scale;
  Dimension dim;
};

// The Moser profile L: 0 for t < 0, t on [0,1), 1 for t >= 1; ||L'|| = 1.
Profile moser_profile();

// g_n(x) = sqrt(2N alpha(n)/gamma_N) psi(-log|x| / alpha(n)), exactly
// representable with breakpoints alpha(n)*y_i.
LogRadialFunction build_concentration(const ConcentrationFamily& fam,
                                      long long n);

// sup over s > 0 of |psi(s)|/sqrt(s); per-segment exact (the interior
// extremum of (a+bs)/sqrt(s) sits at s = a/b), with a flag when the sup is
// attained at the last represented breakpoint.
struct SqrtRatioMax {
  double value = 0;
  double arg = 0;
  bool attained_at_boundary = false;
};
SqrtRatioMax profile_sqrt_ratio_max(const Profile& psi);

// (1/sqrt(gamma_N)) * max_{s>0} |psi(s)|/sqrt(s): the limit Orlicz norm of the
// elementary concentrations generated by psi.
double asymptotic_orlicz_limit(const Profile& psi, const Dimension& dim);

struct ConcentrationIntegral {
  double value = 0;
  double abs_error = 0;
  bool divergent = false;      // lambda below the limit norm
  bool precision_loss = false;
};

// The two-term log-coordinate identity for int (e^{|g_n/lambda|^2} - 1) dx:
//   omega*alpha*[ int_0^inf e^{-2N alpha s (1 - |psi/sqrt(s)|^2/(gamma lambda^2))} ds - 1/(2N alpha) ],
// evaluated in difference form (no cancellation).  Must agree with the direct
// evaluation through build_concentration + exp_functional.
ConcentrationIntegral concentration_orlicz_integral(const Profile& psi,
                                                    double alpha, double lambda,
                                                    const Dimension& dim,
                                                    const QuadratureSpec& q);

// Pointwise sum of the families' concentrations at a shared index.
LogRadialFunction superpose(std::span<const ConcentrationFamily> families,
                            long long n);

// n -> |log(beta(n)/alpha(n))| with a finite-index divergence verdict:
// increasing over the final half of the index set and exceeding `bar` at the
// last index.
struct OrthogonalityReport {
  std::vector<long long> indices;
  std::vector<double> statistic;
  double bar = 0;
  double margin = 0;  // statistic at last index minus bar
  bool increasing_tail = false;
  bool orthogonal = false;
};
OrthogonalityReport scale_orthogonality(const ScaleSequence& a,
                                        const ScaleSequence& b,
                                        double bar = 1.3862943611198906);

// Two-column text serialization, same conventions as LogRadialFunction
// (17-significant-digit values, bit-exact round trip).
void write_profile(std::ostream& os, const Profile& p);
Profile read_profile(std::istream& is);
void save_profile(const std::string& path, const Profile& p);
Profile load_profile(const std::string& path);

void write_scale(std::ostream& os, const ScaleSequence& s);
ScaleSequence read_scale(std::istream& is);

}  // namespace hadams
