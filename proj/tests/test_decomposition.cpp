#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hadams/decomposition.hpp"
#include "hadams/fixtures.hpp"
#include "hadams/norms.hpp"
#include "hadams/orlicz.hpp"
#include "hadams/probes.hpp"

using namespace hadams;

namespace {
const QuadratureSpec kQuad;
const std::vector<long long> kIdx = {4, 8, 16, 32, 64};

ExtractionConfig test_config() {
  ExtractionConfig cfg;
  cfg.y_grid = ExtractionConfig::default_y_grid(3.0, 10);
  cfg.max_levels = 4;
  return cfg;
}
}  // namespace

TEST_CASE("sequence family load checks") {
  const Dimension dim(2);
  CHECK_THROWS_AS(SequenceFamily(dim, {1, 1},
                                 {moser_function(dim, 1), moser_function(dim, 2)},
                                 kQuad),
                  std::invalid_argument);
  const SequenceFamily fam = make_moser_family(dim, kIdx, kQuad);
  CHECK(fam.max_h_norm > 1.0);
  CHECK(fam.max_h_norm < 1.2);  // uniformly bounded
}

TEST_CASE("hypotheses check verdicts") {
  const Dimension dim(2);
  const SequenceFamily fam = make_moser_family(dim, kIdx, kQuad);
  const HypothesesReport rep = hypotheses_check(fam, {1.0, 2.0, 4.0}, 0.0, kQuad);
  CHECK(rep.pass);
  for (const auto& series : rep.tail_mass) {
    for (double m : series) CHECK(m == 0.0);  // compact support in B(1)
  }
  for (double s : rep.sup_left) CHECK(s == 0.0);

  // bump escaping to |x| = n: tail mass grows, verdict fails
  std::vector<LogRadialFunction> bumps;
  for (long long n : kIdx) {
    const double c = -std::log(static_cast<double>(n));  // s at the bump center
    bumps.emplace_back(dim,
                       std::vector<double>{c - 0.4, c, c + 0.4},
                       std::vector<double>{0.0, 1.0, 0.0});
  }
  const SequenceFamily escape(dim, kIdx, std::move(bumps), kQuad);
  const HypothesesReport bad = hypotheses_check(escape, {1.0, 2.0}, 0.0, kQuad);
  CHECK(!bad.tail_ok);
  CHECK(!bad.pass);
}

TEST_CASE("estimate A") {
  const Dimension dim(2);
  const SequenceFamily fam =
      make_moser_family(dim, {5, 10, 20, 40}, kQuad);
  std::vector<double> series;
  const double A = estimate_A(fam, 1.0, ExtractionConfig::ARule::last_index,
                              kQuad, 1, &series);
  const double limit = 1.0 / std::sqrt(dim.gamma);
  CHECK(std::abs(A - limit) / limit < 0.05);
  REQUIRE(series.size() == 4);
  CHECK(series.back() == A);

  // homogeneity of the estimate
  std::vector<LogRadialFunction> scaled;
  for (const auto& f : fam.members) scaled.push_back(f.scaled(2.0));
  const SequenceFamily fam2(dim, fam.indices, std::move(scaled), kQuad);
  const double A2 = estimate_A(fam2, 1.0, ExtractionConfig::ARule::last_index,
                               kQuad, 1);
  CHECK(A2 == doctest::Approx(2.0 * A).epsilon(1e-7));

  // zero family
  std::vector<LogRadialFunction> zeros;
  for (size_t i = 0; i < 3; ++i) {
    zeros.emplace_back(dim, std::vector<double>{0.0, 1.0},
                       std::vector<double>{0.0, 0.0});
  }
  const SequenceFamily zf(dim, {1, 2, 3}, std::move(zeros), kQuad);
  CHECK(estimate_A(zf, 1.0, ExtractionConfig::ARule::last_index, kQuad, 1) == 0.0);
}

TEST_CASE("extract scale: exact argmax at the Moser kink") {
  const Dimension dim(2);
  const double A = 1.0 / std::sqrt(dim.gamma);

  const SequenceFamily fam = make_moser_family(dim, kIdx, kQuad);
  const ScaleExtraction se = extract_scale(fam, A);
  REQUIRE(se.indices.size() == kIdx.size());
  for (size_t i = 0; i < kIdx.size(); ++i) {
    CHECK(se.alpha[i] == static_cast<double>(kIdx[i]));
  }
  CHECK(se.bracket_ok);

  // deeper law: alpha(n) = n^2
  std::vector<LogRadialFunction> sq;
  for (long long n : kIdx) {
    sq.push_back(moser_function(dim, static_cast<double>(n * n)));
  }
  const SequenceFamily fam2(dim, kIdx, std::move(sq), kQuad);
  const ScaleExtraction se2 = extract_scale(fam2, A);
  for (size_t i = 0; i < kIdx.size(); ++i) {
    CHECK(se2.alpha[i] == static_cast<double>(kIdx[i] * kIdx[i]));
  }

  CHECK_THROWS_AS(extract_scale(fam, 0.0), std::invalid_argument);

  // zero members are skipped
  std::vector<LogRadialFunction> with_zero = {
      LogRadialFunction(dim, {0.0, 1.0}, {0.0, 0.0}), moser_function(dim, 8.0)};
  const SequenceFamily fz(dim, {4, 8}, std::move(with_zero), kQuad);
  const ScaleExtraction sz = extract_scale(fz, A);
  CHECK(sz.indices == std::vector<long long>{8});
  CHECK(!sz.notes.empty());
}

TEST_CASE("extract profile recovers L exactly for the Moser family") {
  const Dimension dim(2);
  const SequenceFamily fam = make_moser_family(dim, kIdx, kQuad);
  const ExtractionConfig cfg = test_config();
  const double A = estimate_A(fam, 1.0, cfg.a_rule, kQuad, 1);
  const ScaleExtraction se = extract_scale(fam, A);
  const ProfileExtraction pe = extract_profile(fam, se, cfg, A);

  const Profile L = moser_profile();
  for (size_t g = 0; g < cfg.y_grid.size(); ++g) {
    CHECK(std::abs(pe.profile.values()[g] - L.value(cfg.y_grid[g])) <= 1e-12);
  }
  CHECK(pe.energy == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pe.energy_bar_ok);
  for (double m : pe.clamped_mass) CHECK(m == 0.0);
}

TEST_CASE("planted triangle profile recovered over eight non-dyadic indices") {
  const Dimension dim(2);
  const std::vector<long long> idx = {2, 3, 4, 5, 6, 7, 8, 9};
  const ConcentrationFamily tri{triangle_profile(),
                                ScaleSequence::power_law(idx, 1.0), dim};
  std::vector<LogRadialFunction> members;
  for (long long n : idx) members.push_back(build_concentration(tri, n));
  const SequenceFamily fam(dim, idx, std::move(members), kQuad);

  const ExtractionConfig cfg = test_config();
  const double A = estimate_A(fam, 1.0, cfg.a_rule, kQuad, 1);
  const ScaleExtraction se = extract_scale(fam, A);
  REQUIRE(se.indices.size() == idx.size());
  const ProfileExtraction pe = extract_profile(fam, se, cfg, A);

  // relative L2 error of the recovered profile against the planted one
  const Profile want = triangle_profile();
  double err = 0.0, ref = 0.0;
  for (size_t g = 0; g + 1 < cfg.y_grid.size(); ++g) {
    const double dy = cfg.y_grid[g + 1] - cfg.y_grid[g];
    const double d = pe.profile.values()[g] - want.value(cfg.y_grid[g]);
    const double r = want.value(cfg.y_grid[g]);
    err += d * d * dy;
    ref += r * r * dy;
  }
  CHECK(std::sqrt(err / ref) <= 0.05);
}

TEST_CASE("clamped negative-side mass decreases along the scale") {
  const Dimension dim(2);
  std::vector<LogRadialFunction> members;
  for (long long n : kIdx) {
    const double amp = std::sqrt(2.0 * dim.n * n / dim.gamma);
    members.emplace_back(
        dim, std::vector<double>{-1.0, -0.5, 0.0, static_cast<double>(n)},
        std::vector<double>{0.0, 0.3, 0.0, amp});
  }
  const SequenceFamily fam(dim, kIdx, std::move(members), kQuad);
  const ExtractionConfig cfg = test_config();
  const ScaleExtraction se = extract_scale(fam, 1.0 / std::sqrt(dim.gamma));
  const ProfileExtraction pe = extract_profile(fam, se, cfg, 0.1);
  for (size_t j = 1; j < pe.clamped_mass.size(); ++j) {
    CHECK(pe.clamped_mass[j] < pe.clamped_mass[j - 1]);
    CHECK(pe.clamped_mass[j] > 0.0);
  }
}

TEST_CASE("subtract level: exact self-subtraction and energy drop") {
  const Dimension dim(2);
  const SequenceFamily fam = make_moser_family(dim, kIdx, kQuad);
  const ExtractionConfig cfg = test_config();
  const double A = estimate_A(fam, 1.0, cfg.a_rule, kQuad, 1);
  const ScaleExtraction se = extract_scale(fam, A);
  const ProfileExtraction pe = extract_profile(fam, se, cfg, A);
  SubtractDiagnostics diag;
  const SequenceFamily rem = subtract_level(fam, se, pe.profile, kQuad, &diag);
  for (const auto& r : rem.members) {
    CHECK(r.max_abs_value() <= 1e-12);
  }
  CHECK(diag.rel_deviation <= 0.05);
  CHECK(diag.energy_drop == doctest::Approx(1.0).epsilon(1e-9));

  // two-level fixture: subtracting the deep level leaves the shallow one
  const SequenceFamily two = make_two_level_fixture(dim, kIdx, kQuad);
  const double A0 = estimate_A(two, 1.0, cfg.a_rule, kQuad, 1);
  const ScaleExtraction se2 = extract_scale(two, A0);
  CHECK(se2.alpha.back() == doctest::Approx(4096.0));
  const ProfileExtraction pe2 = extract_profile(two, se2, cfg, A0);
  SubtractDiagnostics diag2;
  const SequenceFamily rem2 = subtract_level(two, se2, pe2.profile, kQuad, &diag2);
  // remainder is the triangle family, exactly
  const ConcentrationFamily tri{triangle_profile(),
                                ScaleSequence::power_law(kIdx, 1.0), dim};
  for (size_t i = 0; i < rem2.size(); ++i) {
    const LogRadialFunction expected = build_concentration(tri, kIdx[i]);
    const LogRadialFunction diff = combine(rem2.members[i], expected, -1.0);
    CHECK(diff.max_abs_value() <= 1e-10);
  }
  CHECK(std::abs(diag2.energy_drop - pe2.energy) / pe2.energy <= 0.05);
}

TEST_CASE("decompose: zero family stops with zero levels") {
  const Dimension dim(2);
  std::vector<LogRadialFunction> zeros;
  for (size_t i = 0; i < 3; ++i) {
    zeros.emplace_back(dim, std::vector<double>{0.0, 1.0},
                       std::vector<double>{0.0, 0.0});
  }
  const SequenceFamily zf(dim, {1, 2, 3}, std::move(zeros), kQuad);
  const DecompositionResult res = decompose(zf, test_config());
  CHECK(res.levels.empty());
  CHECK(res.stop_reason == "A_below_stop_threshold");
}

TEST_CASE("decompose: Moser self-test") {
  const Dimension dim(2);
  const SequenceFamily fam = make_moser_family(dim, kIdx, kQuad);
  const DecompositionResult res = decompose(fam, test_config());
  REQUIRE(res.levels.size() == 1);
  for (size_t i = 0; i < kIdx.size(); ++i) {
    CHECK(res.levels[0].alpha[i] == static_cast<double>(kIdx[i]));
  }
  CHECK(res.levels[0].energy == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.stop_reason == "A_below_stop_threshold");
  for (const auto& r : res.remainder->members) {
    CHECK(r.max_abs_value() <= 1e-10);
  }
  for (const auto& row : res.ledger) {
    CHECK(row.defect_rel <= 1e-9);
  }
}

TEST_CASE("decompose: planted two-level recovery") {
  const Dimension dim(2);
  const SequenceFamily fam = make_two_level_fixture(dim, kIdx, kQuad);
  const DecompositionResult res = decompose(fam, test_config());
  REQUIRE(res.levels.size() == 2);

  CHECK(res.levels[0].alpha.back() == doctest::Approx(4096.0));
  CHECK(res.levels[1].alpha.back() == doctest::Approx(64.0));
  CHECK(res.levels[0].energy == doctest::Approx(1.0).epsilon(0.05));
  CHECK(res.levels[1].energy == doctest::Approx(2.0).epsilon(0.05));

  REQUIRE(res.orthogonality.size() == 1);
  CHECK(res.orthogonality[0].orthogonal);
  for (size_t i = 0; i < res.orthogonality[0].indices.size(); ++i) {
    const double n = static_cast<double>(res.orthogonality[0].indices[i]);
    CHECK(res.orthogonality[0].statistic[i] ==
          doctest::Approx(std::log(n)).epsilon(1e-13));
  }

  CHECK(res.ledger.back().defect_rel <= 0.05);
  CHECK(res.a_series_nonincreasing);

  // finite-index form of the convergence bound: sum A_j^2 bounded via the
  // profile-lemma constant
  const double c_n = 0.5 * std::sqrt((2.0 * dim.n - 1.0) * dim.gamma / (2.0 * dim.n));
  double sum_a_sq = 0.0;
  for (const auto& lvl : res.levels) sum_a_sq += lvl.A_before * lvl.A_before;
  double max_hardy_sq = 0.0;
  for (const auto& row : res.ledger) {
    max_hardy_sq = std::max(max_hardy_sq, row.hardy_sq_u);
  }
  CHECK(sum_a_sq <= max_hardy_sq / (c_n * c_n) + 1e-9);
}

TEST_CASE("decompose: non-orthogonal consecutive extraction is merged and flagged") {
  const Dimension dim(2);
  const SequenceFamily fam = make_moser_family(dim, kIdx, kQuad);
  ExtractionConfig cfg = test_config();
  // a grid that misses the kink at y = 1 leaves a same-scale residue
  cfg.y_grid.clear();
  for (int j = 0; j <= 7; ++j) cfg.y_grid.push_back(0.4 * j);
  cfg.stop_eps_rel = 0.02;
  const DecompositionResult res = decompose(fam, cfg);
  bool merged_or_flagged = false;
  for (const auto& lvl : res.levels) merged_or_flagged |= lvl.merged;
  for (const auto& d : res.diagnostics) {
    merged_or_flagged |= d.find("non-orthogonal") != std::string::npos;
  }
  CHECK(merged_or_flagged);
}

TEST_CASE("decompose: determinism of the serialized result") {
  const Dimension dim(2);
  const SequenceFamily fam = make_two_level_fixture(dim, kIdx, kQuad);
  const ExtractionConfig cfg = test_config();
  const std::string a = decompose(fam, cfg).serialize();
  const std::string b = decompose(fam, cfg).serialize();
  CHECK(a == b);
  CHECK(a.find("levels 2") != std::string::npos);
}

TEST_CASE("decompose rejects families failing the hypotheses unless forced") {
  const Dimension dim(2);
  // growing tail mass: bumps escaping to infinity
  std::vector<LogRadialFunction> bumps;
  for (long long n : kIdx) {
    const double c = -std::log(static_cast<double>(n));
    bumps.emplace_back(dim, std::vector<double>{c - 0.4, c, c + 0.4},
                       std::vector<double>{0.0, 1.0, 0.0});
  }
  const SequenceFamily escape(dim, kIdx, std::move(bumps), kQuad);
  ExtractionConfig cfg = test_config();
  CHECK_THROWS_AS(decompose(escape, cfg), std::invalid_argument);
  cfg.force = true;
  const DecompositionResult res = decompose(escape, cfg);
  CHECK(!res.diagnostics.empty());
}
