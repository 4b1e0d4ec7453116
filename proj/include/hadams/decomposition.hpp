#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hadams/concentration.hpp"
#include "hadams/log_radial.hpp"
#include "hadams/quadrature.hpp"

namespace hadams {

// A finite discretized stand-in for a bounded sequence in the Hardy-type
// space: one function per (strictly increasing) index.
struct SequenceFamily {
  Dimension dim;
  std::vector<long long> indices;
  std::vector<LogRadialFunction> members;
  std::vector<double> h_norms;  // filled at load
  double max_h_norm = 0;

  SequenceFamily(Dimension d, std::vector<long long> idx,
                 std::vector<LogRadialFunction> fns, const QuadratureSpec& q);

  size_t size() const { return members.size(); }
};

struct ExtractionConfig {
  double theta = 1.0;  // Orlicz threshold

  // limsup proxy for the Orlicz norms of a finite family
  enum class ARule { last_index, tail_half_max };
  ARule a_rule = ARule::last_index;

  // limit proxy for the rescaled profiles on the common grid
  enum class LimitProxy { last_index, extrapolate };
  LimitProxy limit_proxy = LimitProxy::extrapolate;

  // near-argmax slack per index (the paper extracts any s with
  // W_n(s) >= sup W_n - 1/n); candidates within slack of the maximum are
  // resolved toward the smallest s
  double argmax_slack_scale = 1.0;  // slack = scale / n

  std::vector<double> y_grid;  // common profile grid, starts at 0

  double stop_eps_rel = 0.05;  // stop when A_l <= stop_eps_rel * A_0
  double stop_eps_abs = 0.0;   // optional absolute floor (0 = unused)
  int max_levels = 5;

  double orthogonality_bar = 1.3862943611198906;  // log 4
  double hypotheses_sup_window = 0.0;             // M in sup_{s<=M}|v_n|
  bool force = false;  // run even if the hypotheses verdicts fail

  int threads = 1;
  QuadratureSpec quad;

  void validate() const;
  static std::vector<double> default_y_grid(double y_max = 3.0, int steps_per_unit = 10);
};

// Finite-index verdicts for the three hypotheses: vanishing tail mass
// (compactness at infinity), sup of |v_n| on (-inf, M] -> 0, and L^2 decay of
// the whole sequence.  Verdicts only; never throws.
struct HypothesesReport {
  std::vector<double> R_grid;
  std::vector<std::vector<double>> tail_mass;  // [R][index]
  std::vector<double> sup_left;                // per index
  std::vector<double> l2_series;               // per index
  bool tail_ok = true;
  bool sup_ok = true;
  bool l2_ok = true;
  bool pass = true;
};
HypothesesReport hypotheses_check(const SequenceFamily& fam,
                                  const std::vector<double>& R_grid, double M,
                                  const QuadratureSpec& q);

// Orlicz norm per index reduced by the configured limsup proxy.
double estimate_A(const SequenceFamily& fam, double theta,
                  ExtractionConfig::ARule rule, const QuadratureSpec& q,
                  int threads = 1, std::vector<double>* series = nullptr);

// Per-index maximizer of W_n(s) = 4|v_n(s)/A|^2 - (2N-1)s over s >= 0.  W_n is
// convex on every linear piece of v_n, so the exact maximizer sits on the
// breakpoint grid (plus the s = 0 boundary).  Also verifies the two-sided
// bracket (A/2) sqrt((2N-1) a_n) <= |v_n(a_n)| <= C sqrt(a_n) + o(1).
struct ScaleExtraction {
  std::vector<long long> indices;  // indices that produced a scale
  std::vector<double> alpha;
  std::vector<double> w_max;
  std::vector<double> v_at_alpha;
  bool bracket_ok = true;
  std::vector<std::string> notes;
};
ScaleExtraction extract_scale(const SequenceFamily& fam, double A,
                              double argmax_slack_scale = 1.0);

// psi_n(y) = sqrt(gamma_N/(2N alpha_n)) v_n(alpha_n y) sampled on the common
// grid; the weak limit is replaced by the configured pointwise limit proxy.
// The y <= 0 part is clamped to zero and its L^2 mass reported.  The returned
// profile is flagged (not rejected) if its energy misses the
// ||psi'|| >= (A/2) sqrt((2N-1) gamma_N / (2N)) bar.
struct ProfileExtraction {
  Profile profile;
  double energy = 0;  // ||psi'||^2
  std::vector<double> clamped_mass;
  double energy_bar = 0;
  bool energy_bar_ok = true;
};
ProfileExtraction extract_profile(const SequenceFamily& fam,
                                  const ScaleExtraction& scales,
                                  const ExtractionConfig& cfg, double A);

// r_n = u_n - g_n on the merged breakpoint grid, with the energy-drop
// diagnostic hardy^2(u_n) - hardy^2(r_n) vs ||psi'||^2 at the largest index.
struct SubtractDiagnostics {
  double hardy_sq_before = 0;
  double hardy_sq_after = 0;
  double energy_drop = 0;
  double profile_energy = 0;
  double rel_deviation = 0;
};
SequenceFamily subtract_level(const SequenceFamily& fam,
                              const ScaleExtraction& scales,
                              const Profile& profile, const QuadratureSpec& q,
                              SubtractDiagnostics* diag = nullptr);

struct DecompositionLevel {
  std::vector<long long> indices;
  std::vector<double> alpha;
  Profile profile;
  double energy = 0;      // ||psi'||^2
  double A_before = 0;    // A estimate that drove this extraction
  bool merged = false;    // re-extracted after a non-orthogonal consecutive pair
  bool energy_bar_flag = false;
};

struct EnergyLedgerRow {
  long long index = 0;
  double hardy_sq_u = 0;
  double energy_sum = 0;
  double hardy_sq_remainder = 0;
  double defect = 0;
  double defect_rel = 0;
};

struct DecompositionResult {
  std::vector<DecompositionLevel> levels;
  std::vector<double> A_series;  // A_0, A_1, ..., A_L (final remainder last)
  std::vector<std::vector<double>> orlicz_series;  // per extraction round
  std::vector<OrthogonalityReport> orthogonality;  // all level pairs j < k
  std::vector<EnergyLedgerRow> ledger;
  std::vector<SubtractDiagnostics> subtraction;
  std::string stop_reason;
  bool a_series_nonincreasing = true;
  std::vector<std::string> diagnostics;
  std::optional<SequenceFamily> remainder;

  std::string serialize() const;  // deterministic structured text
};

DecompositionResult decompose(const SequenceFamily& fam,
                              const ExtractionConfig& cfg);

}  // namespace hadams
