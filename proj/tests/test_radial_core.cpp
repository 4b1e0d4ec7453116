#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hadams/corpus.hpp"
#include "hadams/log_radial.hpp"
#include "hadams/norms.hpp"
#include "hadams/probes.hpp"
#include "hadams/quadrature.hpp"
#include "oracles.hpp"

using namespace hadams;

namespace {
const QuadratureSpec kQuad;
const double kPi = std::acos(-1.0);
}  // namespace

TEST_CASE("dimension constants") {
  const Dimension d2(2);
  CHECK(d2.gamma == doctest::Approx(8.0 * kPi * kPi).epsilon(1e-14));
  CHECK(d2.sphere_area == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
  CHECK(d2.ball_volume == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-14));
  CHECK(d2.beta_h2n == doctest::Approx(32.0 * kPi * kPi).epsilon(1e-14));

  const Dimension d3(3);
  CHECK(d3.gamma == doctest::Approx(6.0 * std::pow(kPi, 3)).epsilon(1e-14));
  // gamma_N = 2N * sphere_area for every N
  CHECK(d3.gamma == doctest::Approx(6.0 * d3.sphere_area).epsilon(1e-15));

  CHECK_THROWS_AS(Dimension(1), std::invalid_argument);
}

TEST_CASE("log radial representation and extension rules") {
  const Dimension dim(2);
  const LogRadialFunction f(dim, {0.0, 1.0, 3.0}, {0.0, 2.0, 1.0});
  CHECK(f.value(-1.0) == 0.0);
  CHECK(f.value(0.0) == 0.0);
  CHECK(f.value(0.5) == doctest::Approx(1.0));
  CHECK(f.value(2.0) == doctest::Approx(1.5));
  CHECK(f.value(3.0) == 1.0);
  CHECK(f.value(100.0) == 1.0);  // plateau
  CHECK(f.slope(0.5) == doctest::Approx(2.0));
  CHECK(f.slope(2.0) == doctest::Approx(-0.5));
  CHECK(f.slope(50.0) == 0.0);

  CHECK_THROWS_AS(LogRadialFunction(dim, {0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LogRadialFunction(dim, {0.0, 0.0}, {0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LogRadialFunction(dim, {0.0, 1.0}, {0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      LogRadialFunction(dim, {0.0, 1.0}, {0.0, std::nan("")}),
      std::invalid_argument);
}

TEST_CASE("l2 norm: zero, unit ball indicator, Moser closed form") {
  const Dimension dim(2);
  const LogRadialFunction zero(dim, {0.0, 1.0}, {0.0, 0.0});
  CHECK(l2_norm(zero, kQuad) == 0.0);

  // u = 1 on B(1): |B(1)| = pi^2/2 in R^4
  const LogRadialFunction ball(dim, {0.0, 1.0}, {1.0, 1.0});
  CHECK(l2_norm(ball, kQuad) ==
        doctest::Approx(std::sqrt(kPi * kPi / 2.0)).epsilon(1e-12));

  for (int N : {2, 3}) {
    const Dimension d(N);
    for (double k : {1.0, 7.0}) {
      const double expected = std::sqrt(oracles::moser_l2_sq(k, N));
      CHECK(l2_norm(moser_function(d, k), kQuad) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("l2 quadrature agrees with the elementary antiderivative") {
  const Dimension dim(2);
  const LogRadialFunction f(dim, {-0.5, 0.7, 1.9, 4.0}, {0.0, 1.2, 0.3, 0.9});
  double expected = 0.0;
  const auto& s = f.breakpoints();
  const auto& v = f.values();
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double b = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    const double a = v[i] - b * s[i];
    expected += oracles::square_exp_integral(a, b, 4.0, s[i], s[i + 1]);
  }
  expected += v.back() * v.back() * std::exp(-4.0 * s.back()) / 4.0;
  expected *= dim.sphere_area;
  CHECK(l2_norm_sq_detail(f, kQuad).value ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("hardy gradient norm is exact") {
  const Dimension dim(2);
  const LogRadialFunction zero(dim, {0.0, 1.0}, {0.0, 0.0});
  CHECK(hardy_gradient_norm(zero) == 0.0);

  // v(s) = s on [0,1], plateau: ||v'|| = 1
  const LogRadialFunction ramp(dim, {0.0, 1.0}, {0.0, 1.0});
  CHECK(hardy_gradient_norm(ramp) ==
        doctest::Approx(std::sqrt(2.0 * kPi * kPi)).epsilon(1e-15));

  for (int N : {2, 3}) {
    const Dimension d(N);
    for (double k : {1.0, 5.0, 40.0}) {
      CHECK(std::abs(hardy_gradient_norm(moser_function(d, k)) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("h1 gradient norm") {
  const Dimension dim(2);
  const LogRadialFunction ramp(dim, {0.0, 1.0}, {0.0, 1.0});
  const double expected =
      std::sqrt(dim.sphere_area * (1.0 - std::exp(-2.0)) / 2.0);
  CHECK(h1_gradient_norm(ramp, kQuad) == doctest::Approx(expected).epsilon(1e-12));

  // ||grad f_k|| decreasing toward 0
  double prev = std::numeric_limits<double>::infinity();
  for (double k : {1.0, 5.0, 10.0, 20.0}) {
    const double g = h1_gradient_norm(moser_function(dim, k), kQuad);
    CHECK(g == doctest::Approx(std::sqrt(oracles::moser_grad_sq(k, 2))).epsilon(1e-10));
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("h_norm report and Pythagoras identity") {
  const Dimension dim(2);
  const LogRadialFunction zero(dim, {0.0, 1.0}, {0.0, 0.0});
  const NormReport zr = h_norm(zero, kQuad);
  CHECK(zr.l2 == 0.0);
  CHECK(zr.grad_l2 == 0.0);
  CHECK(zr.hardy_grad == 0.0);
  CHECK(zr.h_norm == 0.0);

  const NormReport r10 = h_norm(moser_function(dim, 10.0), kQuad);
  CHECK(r10.hardy_grad == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r10.h_norm - 1.0) < 0.05);  // 1 + o(1)
  CHECK(r10.l2 < 0.1);
  CHECK(r10.grad_l2 < 0.3);

  CorpusSpec cs;
  cs.seed = 77;
  cs.count = 20;
  cs.admissible = false;
  for (const auto& f : make_corpus(dim, cs)) {
    const NormReport nr = h_norm(f, kQuad);
    const double lhs = nr.h_norm * nr.h_norm;
    const double rhs = nr.l2 * nr.l2 + nr.grad_l2 * nr.grad_l2 +
                       nr.hardy_grad * nr.hardy_grad;
    CHECK(std::abs(lhs - rhs) <= nr.error_bound + 1e-12 * rhs);
  }
}

TEST_CASE("norm scaling and support bound") {
  const Dimension dim(2);
  CorpusSpec cs;
  cs.seed = 31;
  cs.count = 10;
  cs.admissible = false;
  for (const auto& f : make_corpus(dim, cs)) {
    for (double c : {2.0, 1.0 / 3.0}) {
      const LogRadialFunction g = f.scaled(c);
      CHECK(l2_norm(g, kQuad) == doctest::Approx(c * l2_norm(f, kQuad)).epsilon(1e-10));
      CHECK(hardy_gradient_norm(g) ==
            doctest::Approx(c * hardy_gradient_norm(f)).epsilon(1e-12));
      CHECK(h1_gradient_norm(g, kQuad) ==
            doctest::Approx(c * h1_gradient_norm(f, kQuad)).epsilon(1e-10));
    }
  }

  // supported in the unit ball: l2 <= sqrt(|B(1)|) * max|v|
  CorpusSpec adm;
  adm.seed = 32;
  adm.count = 10;
  adm.admissible = true;
  for (const auto& f : make_corpus(dim, adm)) {
    CHECK(l2_norm(f, kQuad) <=
          std::sqrt(dim.ball_volume) * f.max_abs_value() * (1.0 + 1e-9));
  }
}

TEST_CASE("radial bound check") {
  const Dimension dim(2);
  const LogRadialFunction zero(dim, {0.0, 1.0}, {0.0, 0.0});
  const RadialBoundReport zr = radial_bound_check(zero, kQuad);
  CHECK(zr.pass);
  CHECK(zr.min_slack_h1 == 0.0);  // bound and |u| both vanish

  CHECK(radial_bound_check(moser_function(dim, 5.0), kQuad).pass);

  CorpusSpec cs;
  cs.seed = 2024;
  cs.count = 100;
  cs.admissible = false;
  for (const auto& f : make_corpus(dim, cs)) {
    CHECK(radial_bound_check(f, kQuad).pass);
  }
}

TEST_CASE("strict inclusion witness") {
  const Dimension dim(2);
  std::vector<double> grid;
  const double e_minus_1 = std::exp(1.0) - 1.0;
  for (int j = 0; j <= 200; ++j) grid.push_back(j * 0.1);
  grid.push_back(e_minus_1);
  std::sort(grid.begin(), grid.end());
  const LogRadialFunction w = strict_inclusion_witness(dim, grid);
  CHECK(w.value(0.0) == 0.0);
  CHECK(w.value(e_minus_1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isfinite(h_norm(w, kQuad).h_norm));
  CHECK(h_norm(w, kQuad).h_norm > 0.0);

  CHECK_THROWS_AS(strict_inclusion_witness(dim, {0.0, 5.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(strict_inclusion_witness(dim, {1.0, 15.0}),
                  std::invalid_argument);
}

TEST_CASE("serialization round trip is bit exact") {
  const Dimension dim(3);
  CorpusSpec cs;
  cs.seed = 5;
  cs.count = 5;
  cs.admissible = false;
  for (const auto& f : make_corpus(dim, cs)) {
    std::stringstream ss;
    write_logradial(ss, f);
    const LogRadialFunction g = read_logradial(ss);
    REQUIRE(g.size() == f.size());
    CHECK(g.dim().n == f.dim().n);
    for (size_t i = 0; i < f.size(); ++i) {
      CHECK(g.breakpoints()[i] == f.breakpoints()[i]);
      CHECK(g.values()[i] == f.values()[i]);
    }
  }

  std::stringstream bad("# wrong header\n0 0\n1 1\n");
  CHECK_THROWS_AS(read_logradial(bad), std::invalid_argument);
}

TEST_CASE("quadrature engine") {
  QuadratureSpec bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const QuadratureResult r = integrate_adaptive(
      [](double s) { return std::exp(-s); }, 0.0, 1.0, kQuad);
  CHECK(r.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(r.converged);

  QuadratureSpec strict;
  strict.rel_tol = 1e-15;
  strict.abs_tol = 1e-300;
  strict.max_subdivisions = 2;
  bool threw = false;
  try {
    integrate_adaptive([](double s) { return std::sin(1000.0 * s); }, 0.0, 3.7,
                       strict);
  } catch (const QuadratureError& e) {
    threw = true;
    CHECK(std::isfinite(e.partial.value));
    CHECK(e.partial.abs_error > 0.0);
  }
  CHECK(threw);

  // exponential pre-split covers the domain and keeps the mass
  const auto pieces = split_by_exponent(0.0, 2000.0, 0.0, -8.0, 0.0);
  CHECK(pieces.front().first == 0.0);
  double mass = 0.0;
  for (const auto& [a, b] : pieces) {
    mass += integrate_adaptive([](double s) { return std::exp(-8.0 * s); }, a,
                               b, kQuad)
                .value;
  }
  CHECK(mass == doctest::Approx(1.0 / 8.0).epsilon(1e-10));
}

TEST_CASE("dawson oracle reference values") {
  CHECK(oracles::dawson(0.5) == doctest::Approx(0.4244363835020223).epsilon(1e-13));
  CHECK(oracles::dawson(1.0) == doctest::Approx(0.5380795069127684).epsilon(1e-13));
  CHECK(oracles::dawson(2.0) == doctest::Approx(0.301340388923792).epsilon(1e-13));
  CHECK(oracles::dawson(5.0) == doctest::Approx(0.10213407442427686).epsilon(1e-13));
  CHECK(oracles::dawson(-1.5) == doctest::Approx(-0.42824907108539867).epsilon(1e-13));
}
