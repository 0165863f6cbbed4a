#include <doctest.h>

#include <cmath>
#include <vector>

#include "../support/oracles.hpp"
#include "speq/error.hpp"
#include "speq/kernels.hpp"

using namespace speq::kernels;

namespace {

std::vector<double> radii() {
  std::vector<double> r;
  for (int i = 0; i < 20; ++i) r.push_back(0.1 + i * (4.9 / 19.0));
  return r;
}

void check_close(double got, double want, double rel = 1e-6, double abs_floor = 1e-8) {
  CHECK(std::abs(got - want) <= std::max(rel * std::abs(want), abs_floor));
}

}  // namespace

TEST_CASE("bessel_j special values") {
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(1.0, 0.0) == 0.0);
  CHECK(bessel_j(BesselOrder::halves(1), oracle::pi / 2) == doctest::Approx(2.0 / oracle::pi).epsilon(1e-14));
  CHECK_THROWS_AS(bessel_j(-1.0, 1.0), speq::UnsupportedOrder);
  CHECK_THROWS_AS(BesselOrder::halves(-2), speq::UnsupportedOrder);
}

TEST_CASE("bessel_j matches integral and closed-form oracles on [0, 1000]") {
  std::vector<double> xs;
  for (double x = 0.05; x < 1000.0; x *= 1.07) xs.push_back(x);
  for (double x : {11.9, 11.999999, 12.0, 12.000001, 12.1}) xs.push_back(x);
  double worst = 0.0;
  for (double x : xs) {
    for (int n = 0; n <= 3; ++n) {
      const double want = oracle::bessel_integer(n, x);
      worst = std::max(worst, std::abs(bessel_j(double(n), x) - want) / oracle::bessel_scale(want, x));
    }
    for (int k : {-1, 1, 3, 5}) {
      const double want = oracle::bessel_half(k, x);
      worst = std::max(worst, std::abs(bessel_j(0.5 * k, x) - want) / oracle::bessel_scale(want, x));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("bessel_j agrees with libstdc++ for fractional orders") {
  double worst = 0.0;
  for (double nu : {0.05, 0.6, 1.001, 1.75, 2.5}) {
    for (double x = 0.3; x < 800.0; x *= 1.13) {
      const double want = std::cyl_bessel_j(nu, x);
      worst = std::max(worst, std::abs(bessel_j(nu, x) - want) / oracle::bessel_scale(want, x));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("bessel_j three-term recurrence") {
  for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5, 3.3}) {
    for (double x : {0.7, 3.0, 11.5, 12.5, 40.0, 333.3}) {
      const double lhs = bessel_j(nu - 1.0, x) + bessel_j(nu + 1.0, x);
      const double rhs = 2.0 * nu / x * bessel_j(nu, x);
      CHECK(std::abs(lhs - rhs) < 1e-9);
    }
  }
}

TEST_CASE("bessel seam at the series/asymptotic crossover") {
  for (double nu : {0.0, 0.5, 1.0, 2.5}) {
    const double below = bessel_j(nu, std::nextafter(kSeriesCrossover, 0.0));
    const double above = bessel_j(nu, kSeriesCrossover);
    CHECK(std::abs(below - above) < 1e-11);
  }
}

TEST_CASE("kernels are normalized at the origin") {
  for (int d = 1; d <= 4; ++d) {
    CHECK(ball_kernel(d, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(br_kernel(d, 0.7, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mollifier_kernel(d, 0.1, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    if (d >= 2) {
      CHECK(sphere_kernel(d, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(annulus_kernel(d, 4.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel examples") {
  CHECK(std::abs(sphere_kernel(3, 0.5)) < 1e-14);
  CHECK(std::abs(sphere_kernel(2, 2.404825557695773 / (2 * oracle::pi))) < 1e-12);
  CHECK(std::abs(ball_kernel(1, 0.5)) < 1e-14);
  const double j1 = oracle::bessel_integer(1, 2 * oracle::pi);
  CHECK(ball_kernel(2, 1.0) == doctest::Approx(2 * j1 / (2 * oracle::pi)).epsilon(1e-12));
  CHECK(br_kernel(2, 0.0, 1.0) == doctest::Approx(ball_kernel(2, 1.0)).epsilon(1e-14));
  CHECK(std::abs(mollifier_kernel(2, 0.1, 100.0)) <= std::pow(0.1 * 100.0, -3.0));
  CHECK_THROWS_AS(sphere_kernel(1, 0.3), speq::DimensionError);
  CHECK_THROWS_AS(br_kernel(2, -1.0, 0.3), speq::SingularOrder);
  CHECK_THROWS_AS(annulus_kernel(2, 4.0, 1.5, 0.3), speq::ParameterError);
  CHECK_THROWS_AS(annulus_kernel(2, 4.0, 0.0, 0.3), speq::ParameterError);
}

TEST_CASE("kernels match direct quadrature of their measures") {
  for (double r : radii()) {
    for (int d = 1; d <= 3; ++d) {
      check_close(ball_kernel(d, r), oracle::ball(d, r));
      check_close(br_kernel(d, -0.5, r), oracle::bochner_riesz(d, -0.5, r));
      check_close(br_kernel(d, 0.7, r), oracle::bochner_riesz(d, 0.7, r));
      check_close(mollifier_kernel(d, 1.0, r), oracle::mollifier(d, 1.0, r), 1e-8, 1e-10);
      if (d >= 2) {
        check_close(sphere_kernel(d, r), oracle::sphere(d, r));
        check_close(annulus_kernel(d, 4.0, 0.5, r), oracle::annulus(d, 4.0, 0.5, r));
      }
    }
  }
  check_close(annulus_kernel(2, 4.0, 0.5, 1.0), oracle::annulus(2, 4.0, 0.5, 1.0));
}

TEST_CASE("annulus kernel respects the sphere envelope in |R z|") {
  const auto env = kernel_envelope(KernelKind::annulus, 3);
  CHECK(env.exponent == 1.0);
  CHECK(std::abs(annulus_kernel(3, 10.0, 1.0, 2.0)) <= std::pow(10.0 * 2.0, -env.exponent));
}

TEST_CASE("kernel envelopes") {
  CHECK(kernel_envelope(KernelKind::sphere, 3).exponent == 1.0);
  CHECK(kernel_envelope(KernelKind::ball, 1).exponent == 1.0);
  CHECK(kernel_envelope(KernelKind::bochner_riesz, 2, 0.0).exponent == 1.5);
  CHECK(std::isinf(kernel_envelope(KernelKind::mollifier, 2).exponent));
}

TEST_CASE("local maxima of kernels decay at the envelope rate") {
  struct Case {
    KernelKind kind;
    int d;
    double alpha;
  };
  for (const Case c : {Case{KernelKind::sphere, 2, 0}, Case{KernelKind::sphere, 3, 0},
                       Case{KernelKind::ball, 1, 0}, Case{KernelKind::ball, 2, 0},
                       Case{KernelKind::ball, 3, 0}, Case{KernelKind::bochner_riesz, 2, 0.5},
                       Case{KernelKind::bochner_riesz, 3, -0.5}}) {
    RadialKernel k{c.kind, c.d, 1.0, 1.0, c.alpha, 1.0};
    // Peaks of |k| over unit windows, fitted in log-log coordinates.
    std::vector<double> lx, ly;
    for (double center = 2.0; center < 200.0; center *= 1.25) {
      double peak = 0.0;
      for (int i = 0; i <= 400; ++i) peak = std::max(peak, std::abs(k(center + i / 400.0)));
      lx.push_back(std::log(center));
      ly.push_back(std::log(peak));
    }
    const double n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope + kernel_envelope(c.kind, c.d, c.alpha).exponent) < 0.05);
  }
}

TEST_CASE("bochner-riesz kernel tends to the ball kernel as alpha -> 0") {
  for (double r : {0.3, 1.0, 2.7, 4.4}) {
    double prev = 1e9;
    for (double a : {0.1, 0.01, 0.001}) {
      const double gap = std::abs(br_kernel(2, a, r) - ball_kernel(2, r));
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-3);
  }
}
