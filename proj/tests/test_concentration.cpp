#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hadams/concentration.hpp"
#include "hadams/corpus.hpp"
#include "hadams/fixtures.hpp"
#include "hadams/norms.hpp"
#include "hadams/probes.hpp"

using namespace hadams;

namespace {
const QuadratureSpec kQuad;
}

TEST_CASE("moser profile") {
  const Profile L = moser_profile();
  CHECK(L.value(1.0) == 1.0);
  CHECK(L.value(0.3) == doctest::Approx(0.3));
  CHECK(L.value(-2.0) == 0.0);
  CHECK(L.value(50.0) == 1.0);
  CHECK(L.derivative_l2() == doctest::Approx(1.0).epsilon(1e-15));
  const SqrtRatioMax m = profile_sqrt_ratio_max(L);
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.arg == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(Profile({0.0, 1.0}, {0.1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Profile({0.5, 1.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Profile({0.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Profile({0.0, 1.0, 0.5}, {0.0, 1.0, 0.2}),
                  std::invalid_argument);
}

TEST_CASE("profile Holder bound on the grid") {
  const Dimension dim(2);
  CorpusSpec cs;
  cs.seed = 404;
  cs.count = 10;
  cs.admissible = false;
  cs.s0_min = cs.s0_max = 0.0;
  for (const auto& raw : make_corpus(dim, cs)) {
    const Profile psi(raw.breakpoints(), raw.values());
    const double dl2 = psi.derivative_l2();
    const auto& y = psi.breakpoints();
    for (size_t i = 0; i < y.size(); ++i) {
      for (size_t j = i + 1; j < y.size(); ++j) {
        CHECK(std::abs(psi.value(y[j]) - psi.value(y[i])) <=
              std::sqrt(y[j] - y[i]) * dl2 * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("build_concentration reproduces the Moser sequence exactly") {
  const Dimension dim(2);
  const ConcentrationFamily fam{moser_profile(),
                                ScaleSequence::power_law({1, 5, 10}, 1.0), dim};
  for (long long n : {1LL, 5LL, 10LL}) {
    const LogRadialFunction g = build_concentration(fam, n);
    const LogRadialFunction fk = moser_function(dim, static_cast<double>(n));
    REQUIRE(g.size() == fk.size());
    for (size_t i = 0; i < g.size(); ++i) {
      CHECK(g.breakpoints()[i] == fk.breakpoints()[i]);
      CHECK(g.values()[i] == fk.values()[i]);
    }
  }
  CHECK_THROWS_AS(build_concentration(fam, 7), std::invalid_argument);
}

TEST_CASE("hardy norm of concentrations is the profile energy, n-independent") {
  const Dimension dim(3);
  const Profile tri = triangle_profile();
  const ConcentrationFamily fam{tri, ScaleSequence::power_law({2, 4, 8, 64}, 2.0),
                                dim};
  const double expected = tri.derivative_l2();
  for (long long n : {2LL, 4LL, 8LL, 64LL}) {
    CHECK(std::abs(hardy_gradient_norm(build_concentration(fam, n)) - expected) <=
          1e-12);
  }
}

TEST_CASE("asymptotic orlicz limit per-segment maximum") {
  const Dimension dim(2);
  const double inv = 1.0 / std::sqrt(dim.gamma);
  CHECK(asymptotic_orlicz_limit(moser_profile(), dim) ==
        doctest::Approx(inv).epsilon(1e-14));

  // homogeneity
  const Profile L3({0.0, 1.0}, {0.0, 3.0});
  CHECK(asymptotic_orlicz_limit(L3, dim) == doctest::Approx(3.0 * inv).epsilon(1e-14));

  const Profile tri = triangle_profile();
  const SqrtRatioMax m = profile_sqrt_ratio_max(tri);
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.arg == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(!m.attained_at_boundary);

  // dense-grid cross-check on seeded profiles
  CorpusSpec cs;
  cs.seed = 909;
  cs.count = 10;
  cs.admissible = false;
  cs.s0_min = cs.s0_max = 0.0;
  for (const auto& raw : make_corpus(dim, cs)) {
    const Profile psi(raw.breakpoints(), raw.values());
    const double exact = profile_sqrt_ratio_max(psi).value;
    double scanned = 0.0;
    const double top = psi.plateau_start() + 1.0;
    for (int j = 1; j <= 200000; ++j) {
      const double s = top * j / 200000.0;
      scanned = std::max(scanned, std::abs(psi.value(s)) / std::sqrt(s));
    }
    CHECK(scanned <= exact * (1.0 + 1e-12));
    CHECK(exact <= scanned * (1.0 + 1e-3));
  }
}

TEST_CASE("two-term identity evaluator vs direct functional") {
  const Dimension dim(2);
  const Profile L = moser_profile();
  const double limit = asymptotic_orlicz_limit(L, dim);

  const double lambda = 1.2 * limit;
  const ConcentrationIntegral ci =
      concentration_orlicz_integral(L, 50.0, lambda, dim, kQuad);
  CHECK(!ci.divergent);
  CHECK(ci.value > 0.0);
  const ConcentrationFamily fam{L, ScaleSequence({50}, {50.0}), dim};
  const double direct =
      exp_functional(build_concentration(fam, 50), 1.0 / (lambda * lambda), kQuad)
          .value;
  CHECK(ci.value == doctest::Approx(direct).epsilon(1e-6));

  // below the limit norm: divergence flag
  CHECK(concentration_orlicz_integral(L, 50.0, 0.8 * limit, dim, kQuad).divergent);

  // dominated decay as lambda grows
  const double big = concentration_orlicz_integral(L, 50.0, 10.0, dim, kQuad).value;
  const double bigger =
      concentration_orlicz_integral(L, 50.0, 100.0, dim, kQuad).value;
  CHECK(bigger < big);
  CHECK(big < 1e-4);
}

TEST_CASE("superpose: single family identity and sum trend") {
  const Dimension dim(2);
  const std::vector<long long> idx = {16, 32, 64};
  const ConcentrationFamily a{moser_profile(), ScaleSequence::power_law(idx, 1.0),
                              dim};
  const ConcentrationFamily b{triangle_profile(),
                              ScaleSequence::power_law(idx, 2.0), dim};

  const std::vector<ConcentrationFamily> single = {a};
  const LogRadialFunction s1 = superpose(single, 32);
  const LogRadialFunction g1 = build_concentration(a, 32);
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1.values()[i] == g1.values()[i]);
  }

  // Orlicz norm of the sum approaches the max of the individual limits from
  // above; frozen trend values from the independent oracle run
  OrliczSpec spec;
  const double limit = 1.0 / std::sqrt(dim.gamma);
  const std::vector<ConcentrationFamily> both = {a, b};
  const double expected[3] = {1.2782, 1.1889, 1.1305};
  double prev = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < idx.size(); ++i) {
    const double lam = orlicz_norm(superpose(both, idx[i]), spec, kQuad);
    const double ratio = lam / limit;
    CHECK(ratio == doctest::Approx(expected[i]).epsilon(0.02));
    CHECK(ratio < prev);
    CHECK(ratio > 1.0);
    prev = ratio;
  }
}

TEST_CASE("concentration families: l2 decay and orlicz trend toward the limit") {
  const Dimension dim(2);
  const std::vector<long long> idx = {5, 10, 20, 40};
  const ConcentrationFamily tri{triangle_profile(),
                                ScaleSequence::power_law(idx, 1.0), dim};
  OrliczSpec spec;
  const double limit = asymptotic_orlicz_limit(triangle_profile(), dim);

  double prev_l2 = std::numeric_limits<double>::infinity();
  double prev_gap = std::numeric_limits<double>::infinity();
  for (long long n : idx) {
    const LogRadialFunction g = build_concentration(tri, n);
    const double l2 = l2_norm(g, kQuad);
    CHECK(l2 < prev_l2);
    prev_l2 = l2;

    const double gap = std::abs(orlicz_norm(g, spec, kQuad) - limit) / limit;
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 0.05);  // within 5% at the largest index
}

TEST_CASE("scale orthogonality verdicts") {
  const std::vector<long long> idx = {2, 4, 8, 16, 32, 64, 128};
  const ScaleSequence lin = ScaleSequence::power_law(idx, 1.0);
  const ScaleSequence quad = ScaleSequence::power_law(idx, 2.0);
  const OrthogonalityReport r1 = scale_orthogonality(lin, quad);
  CHECK(r1.orthogonal);
  for (size_t i = 0; i < r1.indices.size(); ++i) {
    CHECK(r1.statistic[i] ==
          doctest::Approx(std::log(static_cast<double>(r1.indices[i])))
              .epsilon(1e-14));
  }

  std::vector<double> doubled;
  for (long long n : idx) doubled.push_back(2.0 * n);
  const ScaleSequence two_n(idx, doubled);
  const OrthogonalityReport r2 = scale_orthogonality(lin, two_n);
  CHECK(!r2.orthogonal);
  for (double s : r2.statistic) CHECK(s == doctest::Approx(std::log(2.0)));

  // slowly diverging: n log n vs n, evaluated up to 10^4
  std::vector<long long> big;
  for (long long n = 16; n <= 10000; n *= 5) big.push_back(n);
  const OrthogonalityReport r3 =
      scale_orthogonality(ScaleSequence::power_law(big, 1.0),
                          ScaleSequence::linear_log(big));
  CHECK(r3.orthogonal);
  CHECK(r3.margin < 1.0);  // low margin
  CHECK(r3.statistic.back() == doctest::Approx(std::log(std::log(1e4))).epsilon(1e-3));
}

TEST_CASE("scale sequence validation and serialization") {
  CHECK_THROWS_AS(ScaleSequence({1, 2}, {2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ScaleSequence({2, 1}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(ScaleSequence::linear_log({1, 2}), std::invalid_argument);

  const ScaleSequence s = ScaleSequence::linear_log({2, 5, 17});
  std::stringstream ss;
  write_scale(ss, s);
  const ScaleSequence t = read_scale(ss);
  REQUIRE(t.indices().size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(t.indices()[i] == s.indices()[i]);
    CHECK(t.alphas()[i] == s.alphas()[i]);
  }

  const Profile tri = triangle_profile();
  std::stringstream ps;
  write_profile(ps, tri);
  const Profile back = read_profile(ps);
  for (size_t i = 0; i < tri.breakpoints().size(); ++i) {
    CHECK(back.breakpoints()[i] == tri.breakpoints()[i]);
    CHECK(back.values()[i] == tri.values()[i]);
  }
}
