#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "speq/analysis.hpp"
#include "speq/error.hpp"

using namespace speq;

namespace {

DecaySeries power_law(std::vector<double> R, double p) {
  DecaySeries s;
  for (double r : R) s.push_back({r, {std::pow(r, p), 0.0}, 0.0});
  return s;
}

// Direct enumeration of Z^d for |n|_inf <= K, plus the far shells as an integral.
double tail_oracle(double delta, int d, double L) {
  const double N = std::pow(delta, -L);
  const int K = d == 2 ? 400 : 60;
  double s = 0.0;
  std::vector<int> n(static_cast<std::size_t>(d), -K);
  while (true) {
    int h = 0;
    for (int c : n) h = std::max(h, std::abs(c));
    if (h >= N) s += std::pow(delta * h, -(d + 1.0));
    int i = 0;
    while (i < d && n[static_cast<std::size_t>(i)] == K) n[static_cast<std::size_t>(i++)] = -K;
    if (i == d) break;
    ++n[static_cast<std::size_t>(i)];
  }
  // Shells k > K: count ~ d 2^d k^{d-1} (+ lower order), integrated from K + 1/2.
  const double a = K + 0.5;
  const double lead = d * std::pow(2.0, d) / a;
  const double next = d == 3 ? 2.0 / (3.0 * a * a * a) : 0.0;
  return s + std::pow(delta, -(d + 1.0)) * (lead + next);
}

}  // namespace

TEST_CASE("decay fits") {
  const auto exact = decay_fit({{1, {1, 0}, 0}, {10, {0.1, 0}, 0}, {100, {0.01, 0}, 0}, {1000, {0.001, 0}, 0}});
  CHECK(exact.exponent == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(exact.residual_rms < 1e-12);

  const auto half = decay_fit(power_law(geometric_grid(2, 300, 8), -0.5));
  CHECK(std::abs(half.exponent + 0.5) < 1e-12);
  CHECK(half.points == 8);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 0.01);
  DecaySeries noisy;
  for (double r : geometric_grid(1, 1000, 12)) noisy.push_back({r, {(1.0 + g(rng)) / r, 0.0}, 0.0});
  const auto nf = decay_fit(noisy);
  CHECK(std::abs(nf.exponent + 1.0) < 0.05);
  CHECK(nf.half_width > 0.0);
  CHECK(std::abs(nf.exponent + 1.0) < nf.half_width * 3.0);

  CHECK_THROWS_AS(decay_fit(power_law({1, 2, 3}, -1.0)), FitRefused);
  DecaySeries floor = power_law({1, 2, 3, 4, 5}, -1.0);
  floor[3].error = 0.1;  // |value| = 0.25 < 10 * 0.1
  CHECK(decay_fit(floor).dropped == 1);
  floor[4].error = 0.1;
  CHECK_THROWS_AS(decay_fit(floor), FitRefused);
  CHECK_THROWS_AS(decay_fit(power_law({1, 3, 2, 4}, -1.0)), ParameterError);
}

TEST_CASE("exponent formulas") {
  CHECK(predict_omega_critical(2, 0.5).value == doctest::Approx(13.0 / 14.0).epsilon(1e-15));
  CHECK(predict_omega_critical(3, 1.0).value == doctest::Approx(10.0 / 11.0).epsilon(1e-15));
  CHECK(predict_omega_critical(2, 1e-12).value == doctest::Approx(1.0));
  CHECK(predict_omega_critical(2, 8.0).clamped);
  CHECK_THROWS_AS(predict_omega_critical(2, 0.0), ParameterError);
  CHECK_THROWS_AS(predict_omega_critical(1, 0.5), DimensionError);

  CHECK(choose_delta_annulus(2, 0.7, 10.0) == doctest::Approx(std::pow(10.0, -0.1)).epsilon(1e-14));
  CHECK(choose_delta_annulus(3, 0.7, 1.0) == 1.0);
  for (int d = 2; d <= 4; ++d) {
    for (double R : {2.0, 17.0, 1e4}) {
      const double gp = 0.37;
      const double delta = choose_delta_annulus(d, gp, R);
      const double L = default_truncation_exponent(d);
      CHECK(std::abs(std::pow(delta, 1.0 + L * (d + 1) / 2.0) - std::pow(R, -gp)) < 1e-12 * std::pow(R, -gp));
    }
  }

  const auto sing = predict_br_rate(2, -1.0, 1.0);
  CHECK(sing.value == 0.0);
  CHECK(sing.singular);
  CHECK(predict_br_rate(2, 0.0, 1.0).value == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  for (int d = 1; d <= 4; ++d) {
    CHECK(predict_br_rate(d, 0.0, 0.3).value * (d + 1) * d == doctest::Approx(0.3).epsilon(1e-15));
    double prev = -1.0;
    for (double a = -0.99; a < d; a += 0.05) {
      const double r = predict_br_rate(d, a, 0.3).value;
      CHECK(r > prev);
      prev = r;
    }
  }
  CHECK_THROWS_AS(predict_br_rate(2, -1.5, 1.0), SingularOrder);
}

TEST_CASE("truncation") {
  CHECK(truncation_radius(0.1, 2) == doctest::Approx(1e4).epsilon(1e-14));
  CHECK(truncation_radius(1.0 - 1e-12, 2) == doctest::Approx(1.0));
  CHECK(truncation_radius(0.5, 2, 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(truncation_radius(1.0, 2), ParameterError);
  for (int d = 2; d <= 3; ++d) {
    for (double delta : {0.5, 0.7}) {
      const double L = 1.5;
      const double t = truncation_tail(delta, d, L);
      CHECK(t == doctest::Approx(tail_oracle(delta, d, L)).epsilon(1e-6));
    }
  }
  // The tail is about d 2^d delta for L = d + 2.
  for (double delta : {0.2, 0.1}) CHECK(truncation_tail(delta, 2) <= 8.0 * 1.05 * delta);
}

TEST_CASE("parseval on spheres") {
  Polynomial one{2, {{{0, 0}, 1.0}}};
  Polynomial lin{2, {{{1, 0}, 1.0}}};
  Polynomial quad{2, {{{0, 0}, 1.0}, {{2, 0}, 1.0}}};
  for (double R : {1.0, 10.0, 100.0}) {
    const auto a = parseval_check(one, R);
    CHECK(a.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.a0 == doctest::Approx(1.0).epsilon(1e-12));
    const auto b = parseval_check(lin, R);
    CHECK(b.lhs == doctest::Approx(R * R / 2.0).epsilon(1e-12));
    CHECK(b.rhs == doctest::Approx(R * R / 2.0).epsilon(1e-12));
    CHECK(std::abs(b.a0) < 1e-12 * R);
    CHECK(b.a0_dominates);
    const auto c = parseval_check(quad, R);
    CHECK(c.a0 == doctest::Approx(1.0 + R * R / 2.0).epsilon(1e-12));
    CHECK(c.lhs == doctest::Approx(1.0 + R * R + 3.0 * std::pow(R, 4) / 8.0).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(c.lhs).epsilon(1e-12));
    CHECK(c.a0_dominates);
    CHECK(c.max_dominates);

    Polynomial q3{3, {{{0, 0, 0}, 1.0}, {{2, 0, 0}, 1.0}}};
    const auto e = parseval_check(q3, R);
    CHECK(e.a0 == doctest::Approx(1.0 + R * R / 3.0).epsilon(1e-12));
    CHECK(e.lhs == doctest::Approx(1.0 + 2.0 * R * R / 3.0 + std::pow(R, 4) / 5.0).epsilon(1e-12));
    CHECK(e.rhs == doctest::Approx(e.lhs).epsilon(1e-12));
  }
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int d = 2; d <= 3; ++d) {
    Polynomial p{d, {}};
    for (int i = 0; i <= 4; ++i) {
      for (int j = 0; i + j <= 4; ++j) {
        if (d == 2) p.terms.push_back({{i, j}, u(rng)});
        for (int k = 0; d == 3 && i + j + k <= 4; ++k) p.terms.push_back({{i, j, k}, u(rng)});
      }
    }
    for (double R : {0.5, 3.0}) {
      const auto r = parseval_check(p, R);
      CHECK(std::abs(r.lhs - r.rhs) <= 1e-8 * r.lhs);
    }
  }
  CHECK_THROWS_AS(parseval_check(Polynomial{4, {{{1, 0, 0, 0}, 1.0}}}, 1.0), Unsupported);
}

TEST_CASE("gamma' estimation") {
  const Space t{identity_torus(2)};
  const Point x{SpaceKind::torus, {0.2, 0.1}};
  const Observable f = character({1, 0});
  const auto grid = geometric_grid(3.0, 60.0, 8);
  const auto null = estimate_gamma_prime(t, f, x, grid, {{-1.0, 0.0}}, {});
  CHECK(null.no_disjointness);
  for (const auto& p : null.series) CHECK(std::abs(std::abs(p.value) - 1.0) < 1e-12);

  // |1 + z| = sqrt(2) - 1 irrational shift: ball kernel decay (d + 1)/2 = 1.5.
  const auto dec = estimate_gamma_prime(t, f, x, grid, {{std::sqrt(2.0) - 2.0, 0.0}}, {});
  REQUIRE(dec.fit.has_value());
  CHECK(!dec.no_disjointness);
  CHECK(dec.gamma_prime == doctest::Approx(1.5).epsilon(0.2));
  CHECK_THROWS_AS(estimate_gamma_prime(t, Observable{Constant{}}, x, grid, {{0.0, 0.0}}, {}), ParameterError);
}

TEST_CASE("smoothing total variation") {
  // Four jumps of height 1/(2W), each smeared by the mollifier: 2 delta E|s| / W.
  const double num = oracle::tanh_sinh([](double s) { return std::abs(s) * oracle::bump(s); }, -1, 1, 2);
  const double den = oracle::tanh_sinh([](double s) { return oracle::bump(s); }, -1, 1, 2);
  const double R = 4.0, omega = 0.5, W = std::pow(R, omega);
  for (double delta : {0.2, 0.05}) {
    const double tv = smoothing_tv_distance(Family::annulus, R, omega, delta);
    CHECK(tv == doctest::Approx(2.0 * delta * num / den / W).epsilon(1e-3));
  }
  const double a = smoothing_tv_distance(Family::bochner_riesz, 4.0, -0.5, 0.1);
  const double b = smoothing_tv_distance(Family::bochner_riesz, 4.0, -0.5, 0.025);
  CHECK(std::log(a / b) / std::log(4.0) == doctest::Approx(0.5).epsilon(0.1));
}
