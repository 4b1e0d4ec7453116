#include "hadams/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hadams/norms.hpp"
#include "hadams/orlicz.hpp"
#include "hadams/parallel.hpp"
#include "hadams/report.hpp"

namespace hadams {

namespace {

// exact integral of v(s)^2 over [lo, hi] (no weight); used for the clamped
// negative-y mass, where the exponential weight is absent after rescaling
double plain_square_integral(const LogRadialFunction& f, double lo, double hi) {
  const auto& s = f.breakpoints();
  const auto& v = f.values();
  double total = 0.0;
  auto segment = [&](double a, double b, double va, double vb) {
    // linear between (a, va) and (b, vb): int v^2 = (b-a)(va^2+va*vb+vb^2)/3
    return (b - a) * (va * va + va * vb + vb * vb) / 3.0;
  };
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = std::max(s[i], lo), b = std::min(s[i + 1], hi);
    if (!(b > a)) continue;
    total += segment(a, b, f.value(a), f.value(b));
  }
  if (hi > s.back()) {
    total += (hi - std::max(lo, s.back())) * v.back() * v.back();
  }
  return total;
}

// nonincreasing-trend verdict for a finite series
bool trend_nonincreasing(const std::vector<double>& series) {
  if (series.size() < 2) return true;
  const double tol = 1e-12 + 1e-9 * std::abs(series.front());
  return series.back() <= series.front() + tol;
}

double hardy_sq(const LogRadialFunction& f) {
  const double h = hardy_gradient_norm(f);
  return h * h;
}

}  // namespace

SequenceFamily::SequenceFamily(Dimension d, std::vector<long long> idx,
                               std::vector<LogRadialFunction> fns,
                               const QuadratureSpec& q)
    : dim(d), indices(std::move(idx)), members(std::move(fns)) {
  if (indices.size() != members.size() || indices.empty()) {
    throw std::invalid_argument("SequenceFamily: need matching nonempty arrays");
  }
  for (size_t i = 0; i < indices.size(); ++i) {
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw std::invalid_argument("SequenceFamily: indices must be strictly increasing");
    }
    if (members[i].dim().n != dim.n) {
      throw std::invalid_argument("SequenceFamily: member dimension mismatch");
    }
  }
  h_norms.reserve(members.size());
  for (const auto& f : members) {
    h_norms.push_back(h_norm(f, q).h_norm);
    max_h_norm = std::max(max_h_norm, h_norms.back());
  }
}

void ExtractionConfig::validate() const {
  if (!(theta > 0)) throw std::invalid_argument("ExtractionConfig: theta > 0");
  if (!(stop_eps_rel > 0) && !(stop_eps_abs > 0)) {
    throw std::invalid_argument("ExtractionConfig: stopping threshold must be positive");
  }
  if (max_levels < 1) throw std::invalid_argument("ExtractionConfig: max_levels >= 1");
  if (y_grid.size() < 3 || y_grid.front() != 0.0) {
    throw std::invalid_argument("ExtractionConfig: y_grid must start at 0 with >= 3 points");
  }
  for (size_t i = 1; i < y_grid.size(); ++i) {
    if (!(y_grid[i] > y_grid[i - 1])) {
      throw std::invalid_argument("ExtractionConfig: y_grid must be strictly increasing");
    }
  }
}

std::vector<double> ExtractionConfig::default_y_grid(double y_max,
                                                     int steps_per_unit) {
  std::vector<double> grid;
  const int count = static_cast<int>(std::llround(y_max * steps_per_unit));
  grid.reserve(count + 1);
  for (int j = 0; j <= count; ++j) {
    grid.push_back(static_cast<double>(j) / steps_per_unit);
  }
  return grid;
}

HypothesesReport hypotheses_check(const SequenceFamily& fam,
                                  const std::vector<double>& R_grid, double M,
                                  const QuadratureSpec& q) {
  HypothesesReport rep;
  rep.R_grid = R_grid;
  rep.tail_mass.assign(R_grid.size(), std::vector<double>(fam.size(), 0.0));

  for (size_t j = 0; j < R_grid.size(); ++j) {
    for (size_t i = 0; i < fam.size(); ++i) {
      const double s_R = -std::log(R_grid[j]);
      rep.tail_mass[j][i] =
          l2_norm_sq_window(fam.members[i], q,
                            -std::numeric_limits<double>::infinity(), s_R)
              .value;
    }
    if (!trend_nonincreasing(rep.tail_mass[j])) rep.tail_ok = false;
  }

  for (size_t i = 0; i < fam.size(); ++i) {
    const LogRadialFunction& f = fam.members[i];
    double sup = std::abs(f.value(M));
    for (size_t k = 0; k < f.size(); ++k) {
      if (f.breakpoints()[k] <= M) {
        sup = std::max(sup, std::abs(f.values()[k]));
      }
    }
    rep.sup_left.push_back(sup);
    rep.l2_series.push_back(l2_norm(f, q));
  }
  rep.sup_ok = trend_nonincreasing(rep.sup_left);
  rep.l2_ok = trend_nonincreasing(rep.l2_series);
  rep.pass = rep.tail_ok && rep.sup_ok && rep.l2_ok;
  return rep;
}

double estimate_A(const SequenceFamily& fam, double theta,
                  ExtractionConfig::ARule rule, const QuadratureSpec& q,
                  int threads, std::vector<double>* series) {
  std::vector<double> norms(fam.size());
  OrliczSpec spec;
  spec.threshold = theta;
  parallel_for(fam.size(), threads, [&](size_t i) {
    norms[i] = orlicz_norm(fam.members[i], spec, q);
  });
  if (series) *series = norms;
  if (rule == ExtractionConfig::ARule::last_index) return norms.back();
  double m = 0.0;
  for (size_t i = norms.size() / 2; i < norms.size(); ++i) m = std::max(m, norms[i]);
  return m;
}

ScaleExtraction extract_scale(const SequenceFamily& fam, double A,
                              double argmax_slack_scale) {
  if (!(A > 0)) throw std::invalid_argument("extract_scale: A must be positive");
  const double lin = 2.0 * fam.dim.n - 1.0;  // (2N-1)
  ScaleExtraction out;
  double max_hardy = 0.0;
  for (const auto& f : fam.members) {
    max_hardy = std::max(max_hardy, hardy_gradient_norm(f));
  }
  const double bracket_c = max_hardy / std::sqrt(fam.dim.sphere_area);

  for (size_t i = 0; i < fam.size(); ++i) {
    const LogRadialFunction& f = fam.members[i];
    const long long n = fam.indices[i];
    if (f.is_zero()) {
      out.notes.push_back("index " + std::to_string(n) + ": zero function, skipped");
      continue;
    }
    auto W = [&](double s) {
      const double r = f.value(s) / A;
      return 4.0 * r * r - lin * s;
    };
    // W is convex on every linear piece of v, so candidate maximizers are the
    // breakpoints (clipped to s >= 0) and the boundary s = 0
    std::vector<double> candidates = {0.0};
    for (double s : f.breakpoints()) {
      if (s > 0.0) candidates.push_back(s);
    }
    double w_max = -std::numeric_limits<double>::infinity();
    for (double s : candidates) w_max = std::max(w_max, W(s));
    const double slack = argmax_slack_scale / static_cast<double>(n);
    double alpha = -1.0;
    for (double s : candidates) {
      if (s > 0.0 && W(s) >= w_max - slack) {
        alpha = s;
        break;  // candidates scanned in increasing order: smallest-s tie rule
      }
    }
    if (alpha <= 0.0) {
      out.notes.push_back("index " + std::to_string(n) +
                          ": maximizer at s = 0 only, skipped");
      continue;
    }
    const double v_alpha = std::abs(f.value(alpha));
    const double lhs = 0.5 * A * std::sqrt(lin * alpha);
    const double rhs = bracket_c * std::sqrt(alpha) + std::abs(f.value(0.0));
    if (!(lhs <= v_alpha * (1.0 + 1e-9) + 1e-12) ||
        !(v_alpha <= rhs * (1.0 + 1e-9) + 1e-12)) {
      out.bracket_ok = false;
      out.notes.push_back("index " + std::to_string(n) + ": bracket (3.4) violated");
    }
    out.indices.push_back(n);
    out.alpha.push_back(alpha);
    out.w_max.push_back(w_max);
    out.v_at_alpha.push_back(f.value(alpha));
  }
  return out;
}

ProfileExtraction extract_profile(const SequenceFamily& fam,
                                  const ScaleExtraction& scales,
                                  const ExtractionConfig& cfg, double A) {
  if (scales.indices.size() < 2) {
    throw std::invalid_argument("extract_profile: scales needed for >= 2 indices");
  }
  const Dimension& d = fam.dim;
  const size_t J = scales.indices.size();
  const auto& grid = cfg.y_grid;

  // rescaled samples psi_n(y) = sqrt(gamma/(2N alpha_n)) v_n(alpha_n y)
  std::vector<std::vector<double>> samples(J, std::vector<double>(grid.size()));
  std::vector<double> clamped(J, 0.0);
  for (size_t j = 0; j < J; ++j) {
    const long long n = scales.indices[j];
    const size_t fi = static_cast<size_t>(
        std::lower_bound(fam.indices.begin(), fam.indices.end(), n) -
        fam.indices.begin());
    const LogRadialFunction& f = fam.members[fi];
    const double alpha = scales.alpha[j];
    const double amp = std::sqrt(d.gamma / (2.0 * d.n * alpha));
    for (size_t g = 0; g < grid.size(); ++g) {
      samples[j][g] = amp * f.value(alpha * grid[g]);
    }
    // L^2 mass of psi_n on (-inf, 0], clamped away by the profile convention
    const double left = f.support_start() < 0
                            ? plain_square_integral(f, f.support_start(), 0.0)
                            : 0.0;
    clamped[j] = (d.gamma / (2.0 * d.n * alpha * alpha)) * left;
  }

  // pointwise limit proxy on the grid
  std::vector<double> psi(grid.size(), 0.0);
  for (size_t g = 1; g < grid.size(); ++g) {
    const double last = samples[J - 1][g];
    if (cfg.limit_proxy == ExtractionConfig::LimitProxy::last_index || J < 3) {
      psi[g] = last;
      continue;
    }
    // Aitken delta-squared over the last three indices, guarded: exact for a
    // geometrically decaying contamination, falls back to the last sample
    const double a = samples[J - 3][g], b = samples[J - 2][g], c = samples[J - 1][g];
    const double d1 = b - a, d2 = c - b;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-30});
    if (std::abs(d2) < std::abs(d1) && std::abs(d1) > 1e-13 * scale) {
      const double denom = d2 - d1;
      double corr = (std::abs(denom) > 1e-14 * scale) ? -d2 * d2 / denom : 0.0;
      if (std::abs(corr) > 10.0 * std::abs(d2)) corr = 0.0;
      psi[g] = c + corr;
    } else {
      psi[g] = c;
    }
  }

  bool all_zero = true;
  for (double p : psi) all_zero = all_zero && p == 0.0;
  if (all_zero) {
    throw std::invalid_argument("extract_profile: profile identically zero on the grid");
  }

  Profile profile(grid, std::move(psi));
  const double dl2 = profile.derivative_l2();
  // profile lemma bar: ||psi'|| >= (A/2) sqrt((2N-1) gamma_N/(2N))
  const double bar = 0.5 * A * std::sqrt((2.0 * d.n - 1.0) * d.gamma / (2.0 * d.n));
  return ProfileExtraction{std::move(profile), dl2 * dl2, std::move(clamped), bar,
                           dl2 >= bar - 1e-9};
}

SequenceFamily subtract_level(const SequenceFamily& fam,
                              const ScaleExtraction& scales,
                              const Profile& profile, const QuadratureSpec& q,
                              SubtractDiagnostics* diag) {
  const Dimension& d = fam.dim;
  std::vector<LogRadialFunction> rem;
  rem.reserve(fam.size());
  size_t last_with_scale = fam.size();
  for (size_t i = 0; i < fam.size(); ++i) {
    const long long n = fam.indices[i];
    const auto it = std::lower_bound(scales.indices.begin(), scales.indices.end(), n);
    if (it == scales.indices.end() || *it != n) {
      rem.push_back(fam.members[i]);
      continue;
    }
    const double alpha = scales.alpha[static_cast<size_t>(it - scales.indices.begin())];
    const double amp = std::sqrt(2.0 * d.n * alpha / d.gamma);
    std::vector<double> gs, gv;
    for (size_t k = 0; k < profile.breakpoints().size(); ++k) {
      gs.push_back(alpha * profile.breakpoints()[k]);
      gv.push_back(amp * profile.values()[k]);
    }
    LogRadialFunction g(d, std::move(gs), std::move(gv));
    rem.push_back(combine(fam.members[i], g, -1.0));
    last_with_scale = i;
  }
  SequenceFamily out(d, fam.indices, std::move(rem), q);
  if (diag && last_with_scale < fam.size()) {
    diag->hardy_sq_before = hardy_sq(fam.members[last_with_scale]);
    diag->hardy_sq_after = hardy_sq(out.members[last_with_scale]);
    diag->energy_drop = diag->hardy_sq_before - diag->hardy_sq_after;
    const double e = profile.derivative_l2();
    diag->profile_energy = e * e;
    diag->rel_deviation = std::abs(diag->energy_drop - diag->profile_energy) /
                          std::max(diag->profile_energy, 1e-12);
  }
  return out;
}

DecompositionResult decompose(const SequenceFamily& fam,
                              const ExtractionConfig& cfg) {
  cfg.validate();
  DecompositionResult res;

  const HypothesesReport hyp = hypotheses_check(
      fam, {1.0, 2.0, 4.0, 8.0}, cfg.hypotheses_sup_window, cfg.quad);
  if (!hyp.pass && !cfg.force) {
    throw std::invalid_argument(
        "decompose: hypotheses verdicts failed (tail/sup/L2 trend); "
        "set force to proceed");
  }
  if (!hyp.pass) res.diagnostics.push_back("hypotheses verdicts failed; forced run");

  SequenceFamily current = fam;
  // family before the most recent subtraction, for the merge path
  SequenceFamily prev_input = fam;
  double threshold = 0.0;

  for (;;) {
    std::vector<double> series;
    const double A = estimate_A(current, cfg.theta, cfg.a_rule, cfg.quad,
                                cfg.threads, &series);
    if (!res.A_series.empty() && A > res.A_series.back() + 1e-12) {
      res.a_series_nonincreasing = false;
      res.diagnostics.push_back(
          "A-series increased at level " + std::to_string(res.A_series.size()) +
          ": limsup proxy failure");
      res.A_series.push_back(A);
      res.orlicz_series.push_back(series);
      res.stop_reason = "a_series_increase";
      break;
    }
    res.A_series.push_back(A);
    res.orlicz_series.push_back(series);
    if (res.A_series.size() == 1) {
      threshold = std::max(cfg.stop_eps_abs, cfg.stop_eps_rel * A);
    }
    if (A <= threshold) {
      res.stop_reason = "A_below_stop_threshold";
      break;
    }
    if (static_cast<int>(res.levels.size()) >= cfg.max_levels) {
      res.stop_reason = "max_levels_reached";
      break;
    }

    ScaleExtraction scales = extract_scale(current, A, cfg.argmax_slack_scale);
    if (scales.indices.size() < 2) {
      res.stop_reason = "no_scales_extracted";
      break;
    }
    if (!scales.bracket_ok) {
      res.diagnostics.push_back("bracket (3.4) violated at level " +
                                std::to_string(res.levels.size() + 1));
    }

    std::optional<ProfileExtraction> prof;
    try {
      prof = extract_profile(current, scales, cfg, A);
    } catch (const std::invalid_argument& e) {
      res.diagnostics.push_back(std::string("profile extraction stopped: ") + e.what());
      res.stop_reason = "profile_extraction_failed";
      break;
    }

    DecompositionLevel level{scales.indices, scales.alpha, prof->profile,
                             prof->energy, A, false, !prof->energy_bar_ok};
    if (!prof->energy_bar_ok) {
      res.diagnostics.push_back("level " + std::to_string(res.levels.size() + 1) +
                                ": profile energy below the lemma bar (flagged)");
    }

    // orthogonality against the previous accepted level
    if (!res.levels.empty()) {
      const DecompositionLevel& prev = res.levels.back();
      ScaleSequence sa(prev.indices, prev.alpha);
      ScaleSequence sb(level.indices, level.alpha);
      const OrthogonalityReport ortho =
          scale_orthogonality(sa, sb, cfg.orthogonality_bar);
      if (!ortho.orthogonal) {
        if (!prev.merged) {
          // merge: re-extract the previous level from its own input on the
          // union of the two implied grids, then resubtract
          const double ratio = level.alpha.back() / prev.alpha.back();
          std::set<double> union_grid(cfg.y_grid.begin(), cfg.y_grid.end());
          for (double y : cfg.y_grid) union_grid.insert(y * ratio);
          std::vector<double> ug;
          for (double y : union_grid) {
            if (ug.empty() || y > ug.back() + 1e-12) ug.push_back(y);
          }
          ExtractionConfig cfg2 = cfg;
          cfg2.y_grid = ug;
          ScaleExtraction prev_scales;
          prev_scales.indices = prev.indices;
          prev_scales.alpha = prev.alpha;
          std::optional<ProfileExtraction> prof2;
          try {
            prof2 = extract_profile(prev_input, prev_scales, cfg2, prev.A_before);
          } catch (const std::invalid_argument& e) {
            res.diagnostics.push_back(std::string("merge re-extraction failed: ") +
                                      e.what() + "; keeping both levels flagged");
          }
          if (prof2) {
            SubtractDiagnostics diag2;
            current = subtract_level(prev_input, prev_scales, prof2->profile,
                                     cfg.quad, &diag2);
            DecompositionLevel& merged_level = res.levels.back();
            merged_level.profile = prof2->profile;
            merged_level.energy = prof2->energy;
            merged_level.merged = true;
            res.subtraction.back() = diag2;
            res.diagnostics.push_back(
                "level " + std::to_string(res.levels.size() + 1) +
                " non-orthogonal with its predecessor: merged and re-extracted");
            continue;  // re-estimate A on the merged remainder
          }
        }
        res.diagnostics.push_back(
            "level " + std::to_string(res.levels.size() + 1) +
            " still non-orthogonal after a merge: accepted with flag");
      }
    }

    SubtractDiagnostics diag;
    prev_input = current;
    current = subtract_level(current, scales, prof->profile, cfg.quad, &diag);
    res.levels.push_back(std::move(level));
    res.subtraction.push_back(diag);
  }

  // pairwise orthogonality statistics over accepted levels
  for (size_t a = 0; a < res.levels.size(); ++a) {
    for (size_t b = a + 1; b < res.levels.size(); ++b) {
      ScaleSequence sa(res.levels[a].indices, res.levels[a].alpha);
      ScaleSequence sb(res.levels[b].indices, res.levels[b].alpha);
      res.orthogonality.push_back(
          scale_orthogonality(sa, sb, cfg.orthogonality_bar));
    }
  }

  // energy ledger per index
  for (size_t i = 0; i < fam.size(); ++i) {
    EnergyLedgerRow row;
    row.index = fam.indices[i];
    row.hardy_sq_u = hardy_sq(fam.members[i]);
    for (const auto& lvl : res.levels) {
      if (std::binary_search(lvl.indices.begin(), lvl.indices.end(), row.index)) {
        row.energy_sum += lvl.energy;
      }
    }
    row.hardy_sq_remainder = hardy_sq(current.members[i]);
    row.defect = row.hardy_sq_u - row.energy_sum - row.hardy_sq_remainder;
    row.defect_rel = std::abs(row.defect) / std::max(row.hardy_sq_u, 1e-12);
    res.ledger.push_back(row);
  }

  res.remainder = std::move(current);
  return res;
}

std::string DecompositionResult::serialize() const {
  std::ostringstream os;
  os << "decomposition v1\n";
  os << "levels " << levels.size() << "\n";
  os << "stop_reason " << stop_reason << "\n";
  os << "a_series";
  for (double a : A_series) os << " " << fmt17(a);
  os << "\n";
  for (size_t j = 0; j < levels.size(); ++j) {
    const auto& lvl = levels[j];
    os << "level " << j + 1 << " energy " << fmt17(lvl.energy) << " A_before "
       << fmt17(lvl.A_before) << " merged " << (lvl.merged ? 1 : 0)
       << " energy_bar_flag " << (lvl.energy_bar_flag ? 1 : 0) << "\n";
    os << "  scale";
    for (size_t i = 0; i < lvl.indices.size(); ++i) {
      os << " " << lvl.indices[i] << ":" << fmt17(lvl.alpha[i]);
    }
    os << "\n  profile";
    for (size_t i = 0; i < lvl.profile.breakpoints().size(); ++i) {
      os << " " << fmt17(lvl.profile.breakpoints()[i]) << ":"
         << fmt17(lvl.profile.values()[i]);
    }
    os << "\n";
  }
  for (size_t p = 0; p < orthogonality.size(); ++p) {
    const auto& o = orthogonality[p];
    os << "orthogonality pair " << p << " verdict " << (o.orthogonal ? 1 : 0)
       << " margin " << fmt17(o.margin) << " statistic";
    for (double s : o.statistic) os << " " << fmt17(s);
    os << "\n";
  }
  os << "ledger\n";
  for (const auto& row : ledger) {
    os << "  n " << row.index << " hardy_sq " << fmt17(row.hardy_sq_u)
       << " energy_sum " << fmt17(row.energy_sum) << " remainder_sq "
       << fmt17(row.hardy_sq_remainder) << " defect_rel "
       << fmt17(row.defect_rel) << "\n";
  }
  for (const auto& d : diagnostics) os << "diagnostic " << d << "\n";
  return os.str();
}

}  // namespace hadams
