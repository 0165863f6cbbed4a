// Acceptance checks: one PASS/FAIL line per criterion, tolerances pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "speq/analysis.hpp"
#include "speq/averages.hpp"
#include "speq/config.hpp"
#include "speq/kernels.hpp"
#include "speq/nilsearch.hpp"
#include "speq/runner.hpp"

using namespace speq;
using namespace speq::kernels;

namespace {

constexpr double kKernelRel = 1e-6;
constexpr double kKernelFloor = 1e-8;
constexpr double kKernelSeconds = 60.0;
constexpr double kTorusExponent = -0.5;
constexpr double kTorusTol = 0.05;
constexpr double kTorusSeconds = 120.0;
constexpr double kCoincidenceRel = 1e-6;
constexpr double kAnnulusRel = 1e-6;
constexpr double kSmoothAnnulusSlope = 1.0;
constexpr double kSmoothBrSlope = 0.5;
constexpr double kSmoothTol = 0.2;
constexpr double kTailC = 8.4;
constexpr double kFormulaTol = 1e-12;
constexpr double kParsevalRel = 1e-8;
constexpr double kVdcTol = 1e-12;
constexpr double kHeisenbergExponent = -0.45;
constexpr double kWitnessModulus = 0.99;
constexpr double kIndependentBound = 0.1;
constexpr double kModularRatio = 0.1;
constexpr double kModularSeconds = 300.0;
constexpr double kNullTol = 1e-10;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& name, const std::string& detail) {
  std::printf("INFO %s: %s\n", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs a criterion; any exception counts as a failure.
void criterion(const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(false, name, std::string("exception: ") + e.what());
  }
}

RunOutput run_preset(const std::string& name) { return run(config_from_text(*preset_text(name))); }

void kernel_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int checked = 0, bad = 0;
  auto check = [&](double got, double want) {
    const double scale = std::max(kKernelRel * std::abs(want), kKernelFloor);
    worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), kKernelFloor / kKernelRel));
    ++checked;
    if (!(std::abs(got - want) <= scale)) ++bad;
  };
  for (int i = 0; i < 20; ++i) {
    const double r = 0.1 + i * (4.9 / 19.0);
    for (int d = 1; d <= 3; ++d) {
      check(ball_kernel(d, r), oracle::ball(d, r));
      check(br_kernel(d, -0.5, r), oracle::bochner_riesz(d, -0.5, r));
      check(br_kernel(d, 0.7, r), oracle::bochner_riesz(d, 0.7, r));
      check(mollifier_kernel(d, 1.0, r), oracle::mollifier(d, 1.0, r));
      if (d >= 2) {
        check(sphere_kernel(d, r), oracle::sphere(d, r));
        check(annulus_kernel(d, 4.0, 0.5, r), oracle::annulus(d, 4.0, 0.5, r));
      } else {
        check(std::cos(kTwoPi * r), oracle::sphere(1, r));
      }
    }
  }
  const double secs = seconds_since(t0);
  report(bad == 0 && secs < kKernelSeconds, "kernel-oracles",
         std::to_string(checked) + " values, " + std::to_string(bad) + " outside 1e-6 relative, worst " +
             fmt("%.2e", worst) + ", " + fmt("%.1f s", secs));
}

void torus_decay() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = run_preset("torus-circle-decay");
  const double secs = seconds_since(t0);
  const auto& rec = out.fits.at(0);
  const bool fitted = rec["status"] == "ok";
  const double e = fitted ? rec["fit"]["exponent"].get<double>() : 0.0;
  report(fitted && out.rows.size() == 16 && std::abs(e - kTorusExponent) <= kTorusTol && secs < kTorusSeconds,
         "torus-sphere-decay",
         std::to_string(out.rows.size()) + " rows, exponent " + fmt("%.4f", e) + " (target -0.50 +- 0.05), " +
             fmt("%.1f s", secs));
}

struct RandomTorus {
  Space space;
  Observable f;
  Point x;
  std::vector<int> n;
  double xi = 0.0;  // |A^T n|
  cplx phase;
};

RandomTorus random_torus(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> k(-2, 2);
  const int n = d + 1;
  std::vector<double> a(static_cast<std::size_t>(n * d));
  for (auto& v : a) v = 2.0 * u(rng) - 1.0;
  std::vector<int> freq(static_cast<std::size_t>(n));
  do {
    for (auto& v : freq) v = k(rng);
  } while (std::all_of(freq.begin(), freq.end(), [](int v) { return v == 0; }));
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = u(rng);
  double xi2 = 0.0, ph = 0.0;
  for (int j = 0; j < d; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += freq[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i * d + j)];
    xi2 += s * s;
  }
  for (int i = 0; i < n; ++i) ph += freq[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  const Space s{make_torus(n, d, a)};
  return {s, character(freq), Point{SpaceKind::torus, x}, freq, std::sqrt(xi2), expi2pi(ph)};
}

void br_ball_coincidence() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> radius(1.0, 8.0);
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    const int d = 1 + i % 3;
    const auto c = random_torus(rng, d);
    const double R = radius(rng);
    QuadratureScheme s;
    const auto ball = ball_average(c.space, c.f, c.x, R, s);
    const auto br = br_average(c.space, c.f, c.x, R, 0.0, s);
    const double rel = std::abs(br.value - ball.value) / std::abs(ball.value);
    worst = std::max(worst, rel);
    ok = ok && rel <= kCoincidenceRel;
  }
  report(ok, "br-ball-coincidence", "10 random torus configs, worst relative difference " + fmt("%.2e", worst));
}

void annulus_consistency() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> radius(3.0, 12.0), omega(0.2, 0.9);
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 5; ++i) {
    const int d = 2 + i % 2;
    const auto c = random_torus(rng, d);
    const double R = radius(rng), om = omega(rng);
    const auto a = annulus_average(c.space, c.f, c.x, R, om, {});
    const cplx want = c.phase * oracle::annulus(d, R, om, c.xi);
    const double rel = std::abs(a.value - want) / std::abs(want);
    worst = std::max(worst, rel);
    ok = ok && rel <= kAnnulusRel;
  }
  report(ok, "annulus-consistency", "5 configs (d = 2, 3) against a double quadrature, worst relative " +
                                        fmt("%.2e", worst));
}

double smoothing_slope(const AverageSpec& base, const Space& t, const Observable& f, const Point& x) {
  const auto plain = base_average(t, f, x, base);
  DecaySeries s;
  for (double delta : {0.025, 0.05, 0.1, 0.2}) {
    const auto m = mollified_average(t, f, x, base, delta);
    s.push_back({delta, m.value - plain.value, m.error + plain.error});
  }
  return decay_fit(s).exponent;
}

void smoothing_scaling() {
  const Space t{identity_torus(2)};
  const Observable f = character({1, 0});
  const Point x{SpaceKind::torus, {0.2, 0.1}};
  AverageSpec ann;
  ann.family = Family::annulus;
  ann.R = 20.3;
  ann.omega = 0.5;
  AverageSpec br;
  br.family = Family::bochner_riesz;
  br.R = 20.3;
  br.alpha = -0.5;
  const double sa = smoothing_slope(ann, t, f, x);
  const double sb = smoothing_slope(br, t, f, x);
  const bool ok = std::abs(sa - kSmoothAnnulusSlope) <= kSmoothTol && std::abs(sb - kSmoothBrSlope) <= kSmoothTol;
  report(ok, "smoothing-scaling",
         "delta-slope annulus " + fmt("%.3f", sa) + " (target 1.0 +- 0.2), bochner-riesz alpha=-0.5 " +
             fmt("%.3f", sb) + " (target 0.5 +- 0.2)");

  // Total-variation distance between the 1-D radial measure and its mollification.
  auto tv_slope = [](Family fam, double param) {
    const double a = smoothing_tv_distance(fam, 20.0, param, 0.2);
    const double b = smoothing_tv_distance(fam, 20.0, param, 0.025);
    return std::log(a / b) / std::log(8.0);
  };
  info("smoothing-scaling", "total-variation delta-slopes: annulus " + fmt("%.3f", tv_slope(Family::annulus, 0.5)) +
                                ", bochner-riesz alpha=-0.5 " +
                                fmt("%.3f", tv_slope(Family::bochner_riesz, -0.5)));
}

void truncation() {
  bool ok = true;
  std::string detail;
  for (double delta : {0.2, 0.1}) {
    const double tail = truncation_tail(delta, 2, 4.0);
    ok = ok && tail <= kTailC * delta;
    detail += "delta=" + fmt("%g", delta) + " tail=" + fmt("%.6g", tail) + " C*delta=" + fmt("%.6g", kTailC * delta) + "; ";
  }
  report(ok, "truncation-tail", detail + "d=2, L=4, C=8.4");
}

void formulas() {
  bool ok = std::abs(predict_omega_critical(2, 0.5).value - 13.0 / 14.0) <= kFormulaTol;
  double worst = 0.0;
  for (int d = 2; d <= 4; ++d) {
    for (double gp : {0.1, 0.5, 1.3}) {
      for (double R : {2.0, 50.0, 1e4}) {
        const double delta = choose_delta_annulus(d, gp, R);
        const double L = default_truncation_exponent(d);
        const double lhs = std::pow(delta, 1.0 + L * (d + 1) / 2.0);
        const double rhs = std::pow(R, -gp);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
      }
    }
  }
  ok = ok && worst <= kFormulaTol;
  bool zero = true;
  for (int d = 1; d <= 4; ++d) {
    const auto r = predict_br_rate(d, -1.0, 0.7);
    zero = zero && r.value == 0.0 && r.singular;
  }
  ok = ok && zero;
  report(ok, "formulas",
         "omega_critical(2, 0.5) = " + fmt("%.17g", predict_omega_critical(2, 0.5).value) +
             ", delta relation worst relative " + fmt("%.1e", worst) + ", br_rate(alpha=-1) = 0: " +
             (zero ? "yes" : "no"));
}

void parseval() {
  const std::vector<Polynomial> polys{Polynomial{2, {{{0, 0}, 1.0}}}, Polynomial{2, {{{1, 0}, 1.0}}},
                                      Polynomial{2, {{{0, 0}, 1.0}, {{2, 0}, 1.0}}}};
  bool ok = true;
  double worst = 0.0;
  for (const auto& p : polys) {
    for (double R : {1.0, 10.0, 100.0}) {
      const auto r = parseval_check(p, R);
      const double rel = std::abs(r.lhs - r.rhs) / r.lhs;
      worst = std::max(worst, rel);
      ok = ok && rel <= kParsevalRel && r.a0_dominates && std::abs(r.a0) >= std::abs(r.p0);
    }
  }
  report(ok, "parseval", "3 polynomials x R in {1, 10, 100}, worst relative " + fmt("%.1e", worst) +
                             ", |a0| >= |p(0)| throughout: " + (ok ? "yes" : "no"));
}

void heisenberg() {
  // One-parameter property in exact dyadic arithmetic.
  bool exact = true;
  for (const HeisenbergFactor f : {HeisenbergFactor{1.5, -0.75, 0.25}, HeisenbergFactor{0.5, 2.0, -1.0}}) {
    for (double t : {0.5, -1.25, 3.0}) {
      for (double s : {0.125, 2.0, -0.5}) {
        exact = exact && heisenberg_mul(heisenberg_flow(f, t), heisenberg_flow(f, s)) == heisenberg_flow(f, t + s);
      }
    }
  }
  const Space simple{HeisenbergProductSpace{{{1.0, 0.0, 0.0}}, true}};
  const Observable central = central_character({1});
  double vdc = 0.0;
  bool abelian = true;
  for (double h : {0.3, 1.7}) {
    const std::vector<double> shift{h};
    const Observable g = vdc_difference(simple, central, shift);
    const auto& lp = std::get<LinearPhase>(g.body);
    abelian = abelian && lp.k[0] == 0.0;
    for (int i = 0; i < 100; ++i) {
      const Point x = haar_sample(simple, 500 + i);
      const cplx direct = eval(simple, central, translate(simple, x, shift)) * std::conj(eval(simple, central, x));
      vdc = std::max(vdc, std::abs(eval(simple, g, x) - direct));
    }
  }
  const auto out = run_preset("heisenberg-abelian-decay");
  const auto& rec = out.fits.at(0);
  const bool fitted = rec["status"] == "ok";
  const double e = fitted ? rec["fit"]["exponent"].get<double>() : 0.0;
  const bool ok = exact && abelian && vdc <= kVdcTol && fitted && e <= kHeisenbergExponent;
  report(ok, "heisenberg", std::string("flow one-parameter exact: ") + (exact ? "yes" : "no") +
                               ", vdc max deviation " + fmt("%.1e", vdc) + " on 200 points, sphere exponent " +
                               fmt("%.4f", e) + " (<= -0.45; candidates " +
                               fmt("%.1f", rec["candidate_exponents"]["sphere"].get<double>()) + " and " +
                               fmt("%.1f", rec["candidate_exponents"]["ball"].get<double>()) + ")");
}

void obstruction() {
  const auto dep = run_preset("nil-dependent");
  const auto ind = run_preset("nil-independent");
  const std::vector<int> witness{1, -1, 0, 0};
  const bool found = dep.obstruction && dep.obstruction->found && dep.obstruction->character == witness;
  double min_mod = 1e300;
  for (const auto& r : dep.rows) min_mod = std::min(min_mod, std::abs(r.value));
  const bool none = ind.obstruction && !ind.obstruction->found;
  double at200 = 1e300;
  for (const auto& r : ind.rows) {
    if (r.R == 200.0) at200 = std::abs(r.value);
  }
  const bool ok = found && min_mod >= kWitnessModulus && none && at200 < kIndependentBound;
  report(ok, "obstruction-dichotomy",
         std::string("dependent: found ") + (found ? "(1,-1,0,0)" : "nothing/other") + ", min modulus " +
             fmt("%.6f", min_mod) + "; independent: " + (none ? "none found" : "found") + ", |average| at R=200 " +
             fmt("%.2e", at200));
}

void modular() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = run_preset("modular-ball-sanity");
  const double secs = seconds_since(t0);
  std::vector<double> mag;
  for (const auto& r : out.rows) mag.push_back(std::abs(r.value));
  // Envelope: maxima over consecutive blocks of three radii.
  std::vector<double> env;
  for (std::size_t i = 0; i < mag.size(); i += 3) {
    env.push_back(*std::max_element(mag.begin() + static_cast<long>(i),
                                    mag.begin() + static_cast<long>(std::min(i + 3, mag.size()))));
  }
  bool decreasing = env.size() >= 2;
  for (std::size_t i = 1; i < env.size(); ++i) decreasing = decreasing && env[i] < env[i - 1];
  const double ratio = env.back() / env.front();
  std::string e;
  for (double v : env) e += fmt("%.2e ", v);
  report(decreasing && ratio < kModularRatio && secs < kModularSeconds, "modular-sanity",
         "block envelope " + e + "ratio last/first " + fmt("%.3f", ratio) + ", " + fmt("%.1f s", secs));
}

void null_guard() {
  const auto out = run_preset("twisted-null");
  double worst = 0.0;
  for (const auto& r : out.rows) worst = std::max(worst, std::abs(std::abs(r.value) - 1.0));
  report(worst <= kNullTol && !out.rows.empty(), "null-guard",
         std::to_string(out.rows.size()) + " radii, max ||value| - 1| = " + fmt("%.1e", worst));
}

}  // namespace

int main() {
  criterion("kernel-oracles", kernel_oracles);
  criterion("torus-sphere-decay", torus_decay);
  criterion("br-ball-coincidence", br_ball_coincidence);
  criterion("annulus-consistency", annulus_consistency);
  criterion("smoothing-scaling", smoothing_scaling);
  criterion("truncation-tail", truncation);
  criterion("formulas", formulas);
  criterion("parseval", parseval);
  criterion("heisenberg", heisenberg);
  criterion("obstruction-dichotomy", obstruction);
  criterion("modular-sanity", modular);
  criterion("null-guard", null_guard);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
