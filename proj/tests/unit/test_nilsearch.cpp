#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "speq/error.hpp"
#include "speq/nilsearch.hpp"

using namespace speq;

namespace {

Space heis(std::vector<HeisenbergFactor> f) { return Space{HeisenbergProductSpace{std::move(f), true}}; }

}  // namespace

TEST_CASE("character enumeration") {
  const auto one = enumerate_characters(1, 2);
  REQUIRE(one.size() == 4);
  CHECK(one == std::vector<std::vector<int>>{{-2}, {-1}, {1}, {2}});
  CHECK(enumerate_characters(2, 1).size() == 8);
  const auto big = enumerate_characters(2, 10);
  CHECK(big.size() == 440);
  CHECK(std::is_sorted(big.begin(), big.end()));
  CHECK_THROWS_AS(enumerate_characters(4, 30, 1000), CapacityError);
  CHECK_THROWS_AS(enumerate_characters(2, 0.5), ParameterError);
}

TEST_CASE("orbit frequencies") {
  const Space h1 = heis({{std::sqrt(2.0), std::sqrt(3.0), 0.0}});
  CHECK(orbit_frequency(h1, std::vector<int>{0, 0}, std::vector<double>{1.0}) == 0.0);
  CHECK(orbit_frequency(h1, std::vector<int>{1, 0}, std::vector<double>{1.0}) == doctest::Approx(std::sqrt(2.0)));
  const Space h2 = heis({{1.0, 2.0, 0.0}, {3.0, 5.0, 0.0}});
  CHECK(orbit_frequency(h2, std::vector<int>{1, 1, 0, 0}, std::vector<double>{0.0, 1.0}) == 0.0);
  CHECK(orbit_frequency(h2, std::vector<int>{1, 1, 1, 1}, std::vector<double>{0.6, 0.8}) ==
        doctest::Approx(0.6 * 3.0 + 0.8 * 8.0));
}

TEST_CASE("obstruction search") {
  const auto dep = obstruction_search(heis({{1.0, 1.0, 0.0}}), 0.2, 2.0, 2.0, 1000.0);
  REQUIRE(dep.found);
  CHECK(*dep.character == std::vector<int>{1, -1});
  CHECK(dep.tau == 0.0);

  // Brute-force minimum of |z1 sqrt2 + z2 sqrt3| over the box: about 0.0321 at (11, -9).
  double best = 1e9;
  for (int a = -25; a <= 25; ++a) {
    for (int b = -25; b <= 25; ++b) {
      if (a != 0 || b != 0) best = std::min(best, std::abs(a * std::sqrt(2.0) + b * std::sqrt(3.0)));
    }
  }
  CHECK(best == doctest::Approx(0.0321).epsilon(0.01));
  const auto ind = obstruction_search(heis({{std::sqrt(2.0), std::sqrt(3.0), 0.0}}), 0.2, 2.0, 2.0, 1000.0);
  CHECK(!ind.found);
  CHECK(ind.threshold == doctest::Approx(0.025));
  CHECK(ind.threshold < best);
  // A longer orbit segment makes the same box too coarse: (11, -9) is caught.
  const auto far = obstruction_search(heis({{std::sqrt(2.0), std::sqrt(3.0), 0.0}}), 0.2, 2.0, 2.0, 700.0);
  REQUIRE(far.found);
  CHECK(*far.character == std::vector<int>{11, -9});

  const auto two = obstruction_search(heis({{1.0, 1.0, 0.0}, {std::sqrt(2.0), std::sqrt(3.0), 0.1}}), 0.2, 2.0, 2.0,
                                      1000.0);
  REQUIRE(two.found);
  CHECK(*two.character == std::vector<int>{1, -1, 0, 0});

  // Lexicographic tie-break within a shell.
  const auto tie = obstruction_search(heis({{1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}}), 0.2, 2.0, 2.0, 1000.0);
  REQUIRE(tie.found);
  CHECK(*tie.character == std::vector<int>{0, 0, 1, -1});

  const auto tiny = obstruction_search(heis({{std::sqrt(2.0), std::sqrt(3.0), 0.0}}), 0.45, 0.5, 2.0, 10.0);
  CHECK(tiny.scanned <= 8);
  CHECK(to_json(tiny) == to_json(obstruction_search(heis({{std::sqrt(2.0), std::sqrt(3.0), 0.0}}), 0.45, 0.5, 2.0, 10.0)));

  CHECK_THROWS_AS(obstruction_search(heis({{1.0, 1.0, 0.0}}), 0.5, 2.0, 2.0, 10.0), ParameterError);
  CHECK_THROWS_AS(obstruction_search(heis({{1.0, 1.0, 0.0}}), 0.01, 3.0, 2.0, 10.0, 1000), CapacityError);
  CHECK(default_nil_delta(100.0, 0.5, 2.0, 2.0, 2) == doctest::Approx(std::pow(100.0, -0.5 / 6.0)));
}

TEST_CASE("exceptional directions") {
  const std::vector<double> w{1.0, 0.0};
  const auto m = exceptional_directions(w, 0.01, 200000);
  CHECK(m.measure == doctest::Approx(2.0 * std::asin(0.01) / kPi).epsilon(1e-3));
  CHECK(m.ratio == doctest::Approx(2.0 / kPi).epsilon(1e-3));
  CHECK(exceptional_directions(w, 1.0, 64).measure == 1.0);
  double prev = 0.0;
  for (double tau : {0.001, 0.01, 0.05, 0.2, 0.7}) {
    const double v = exceptional_directions(std::vector<double>{0.3, -0.4, 1.2}, tau, 200).measure;
    CHECK(v >= prev);
    prev = v;
  }
  // Uniform measure on S^2: |<e3, u>| <= tau has measure tau exactly.
  CHECK(exceptional_directions(std::vector<double>{0.0, 0.0, 1.0}, 0.1, 400).measure == doctest::Approx(0.1).epsilon(1e-9));
  const Space h = heis({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  CHECK(exceptional_directions(h, std::vector<int>{1, 0, 0, 0}, 0.01, 100000).measure ==
        doctest::Approx(2.0 * std::asin(0.01) / kPi).epsilon(1e-3));
}

TEST_CASE("van der Corput differencing") {
  const Space simple = heis({{1.0, 0.0, 0.0}});
  const Observable central = central_character({1});
  for (double t : {0.3, 1.7, -2.25}) {
    const std::vector<double> h{t};
    const Observable g = vdc_difference(simple, central, h);
    const auto& lp = std::get<LinearPhase>(g.body);
    CHECK(lp.k == std::vector<double>{0.0, t});
    CHECK(std::abs(lp.constant - 1.0) < 1e-15);
    for (int i = 0; i < 100; ++i) {
      const Point x = haar_sample(simple, 1000 + i);
      const cplx direct = eval(simple, central, translate(simple, x, h)) * std::conj(eval(simple, central, x));
      CHECK(std::abs(eval(simple, g, x) - direct) < 1e-12);
    }
  }
  const Space gen = heis({{std::sqrt(2.0), std::sqrt(3.0), 0.4}, {0.5, std::sqrt(5.0), 0.0}});
  const Observable c2 = central_character({2, -1});
  const std::vector<double> h{0.7, -1.3};
  const Observable g = vdc_difference(gen, c2, h);
  for (int i = 0; i < 100; ++i) {
    const Point x = haar_sample(gen, 77 + i);
    CHECK(std::abs(eval(gen, g, x) - vdc_lifted(gen, c2, x, h)) < 1e-12);
  }
  const Observable ab = abelian_character({1, 2, 0, -1});
  const Observable diff = vdc_difference(gen, ab, h);
  const auto& lp = std::get<LinearPhase>(diff.body);
  CHECK(std::all_of(lp.k.begin(), lp.k.end(), [](double k) { return k == 0.0; }));
  const Point x = haar_sample(gen, 3);
  const cplx direct = eval(gen, ab, translate(gen, x, h)) * std::conj(eval(gen, ab, x));
  CHECK(std::abs(lp.constant - direct) < 1e-12);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(std::abs(eval(gen, vdc_difference(gen, c2, zero), x) - 1.0) < 1e-15);
  CHECK_THROWS_AS(vdc_difference(gen, Observable{Constant{}}, h), TypeMismatch);
}
