#include "speq/analysis.hpp"

#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "speq/error.hpp"
#include "speq/kernels.hpp"
#include "speq/parallel.hpp"
#include "speq/quadrature.hpp"

namespace speq {

DecayFit decay_fit(const DecaySeries& series, double noise_factor) {
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].R > series[i - 1].R)) throw ParameterError("decay series R must be strictly increasing");
  }
  std::vector<double> xs, ys;
  DecayFit fit;
  for (const auto& p : series) {
    if (!(p.R > 0.0)) throw ParameterError("decay series R must be positive");
    const double a = std::abs(p.value);
    if (!(a > 0.0) || !std::isfinite(a) || a < noise_factor * p.error) {
      ++fit.dropped;
      continue;
    }
    xs.push_back(std::log(p.R));
    ys.push_back(std::log(a));
  }
  fit.points = xs.size();
  if (xs.size() < 4) {
    throw FitRefused("only " + std::to_string(xs.size()) + " usable points (need 4; " +
                     std::to_string(fit.dropped) + " at the noise floor)");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.intercept - fit.exponent * xs[i];
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  const double slope_se = std::sqrt(ss / (n - 2.0) / sxx);
  const boost::math::students_t dist(n - 2.0);
  fit.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * slope_se;
  return fit;
}

namespace {

double exponent_denominator(int d) { return static_cast<double>(d * d + 3 * d + 4); }

void check_gamma(double gamma_prime) {
  if (!(gamma_prime > 0.0) || !std::isfinite(gamma_prime)) throw ParameterError("gamma' must be positive");
}

}  // namespace

OmegaPrediction predict_omega_critical(int d, double gamma_prime) {
  if (d < 2) throw DimensionError("omega_critical needs d >= 2");
  check_gamma(gamma_prime);
  const double v = 1.0 - 2.0 * gamma_prime / exponent_denominator(d);
  if (v <= 0.0) return {0.0, true};
  return {v, false};
}

double choose_delta_annulus(int d, double gamma_prime, double R) {
  if (d < 1) throw DimensionError("d must be positive");
  check_gamma(gamma_prime);
  if (!(R >= 1.0) || !std::isfinite(R)) throw ParameterError("R must be at least 1");
  return std::pow(R, -2.0 * gamma_prime / exponent_denominator(d));
}

RatePrediction predict_br_rate(int d, double alpha, double gamma_prime) {
  if (d < 1) throw DimensionError("d must be positive");
  check_gamma(gamma_prime);
  if (alpha < -1.0) throw SingularOrder("Bochner-Riesz order alpha must be >= -1");
  if (!(alpha < d)) throw ParameterError("the rate formula needs alpha < d");
  if (alpha == -1.0) return {0.0, true};
  return {gamma_prime * (1.0 + alpha) / ((d + 1.0) * (d - alpha)), false};
}

int default_truncation_exponent(int d) { return d + 2; }

double truncation_radius(double delta, int d, double L) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("truncation needs 0 < delta < 1");
  if (d < 1) throw DimensionError("d must be positive");
  if (L <= 0.0) L = default_truncation_exponent(d);
  return std::pow(delta, -L);
}

double truncation_tail(double delta, int d, double L) {
  const double N = truncation_radius(delta, d, L);
  // #{|n|_inf = k} = (2k+1)^d - (2k-1)^d = sum_j c_j k^j, j < d.
  std::vector<double> c(static_cast<std::size_t>(d), 0.0);
  for (int j = 0; j < d; ++j) {
    double binom = 1.0;
    for (int i = 0; i < j; ++i) binom = binom * (d - i) / (i + 1);
    const int sign_diff = ((d - j) % 2 == 1) ? 2 : 0;  // 1^{d-j} - (-1)^{d-j}
    c[static_cast<std::size_t>(j)] = binom * std::pow(2.0, j) * sign_diff;
  }
  const double k0 = std::ceil(N);
  double sum = 0.0;
  for (int j = 0; j < d; ++j) {
    if (c[static_cast<std::size_t>(j)] == 0.0) continue;
    sum += c[static_cast<std::size_t>(j)] * gsl_sf_hzeta(static_cast<double>(d + 1 - j), k0);
  }
  return std::pow(delta, -(d + 1.0)) * sum;
}

double Polynomial::operator()(std::span<const double> v) const {
  double s = 0.0;
  for (const auto& t : terms) {
    double m = t.coeff;
    for (std::size_t i = 0; i < t.exponents.size(); ++i) m *= std::pow(v[i], t.exponents[i]);
    s += m;
  }
  return s;
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& t : terms) {
    int k = 0;
    for (int e : t.exponents) k += e;
    deg = std::max(deg, k);
  }
  return deg;
}

namespace {

void check_polynomial(const Polynomial& p) {
  for (const auto& t : p.terms) {
    if (static_cast<int>(t.exponents.size()) != p.d) throw DimensionError("monomial exponent count must equal d");
    for (int e : t.exponents) {
      if (e < 0) throw ParameterError("monomial exponents must be nonnegative");
    }
  }
}

double constant_term(const Polynomial& p) {
  double c = 0.0;
  for (const auto& t : p.terms) {
    if (std::all_of(t.exponents.begin(), t.exponents.end(), [](int e) { return e == 0; })) c += t.coeff;
  }
  return c;
}

}  // namespace

ParsevalResult parseval_check(const Polynomial& p, double R) {
  if (p.d > 3) throw Unsupported("parseval_check supports d in {2, 3}");
  if (p.d < 2) throw DimensionError("parseval_check supports d in {2, 3}");
  if (!(R > 0.0) || !std::isfinite(R)) throw ParameterError("R must be positive");
  check_polynomial(p);
  const int deg = p.degree();
  ParsevalResult out;
  out.p0 = constant_term(p);
  std::vector<double> v(static_cast<std::size_t>(p.d));

  if (p.d == 2) {
    // Trapezoid projection onto e^{ik theta}, exact for |k| + deg < n.
    const int n = 2 * deg + 4;
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double th = kTwoPi * i / n;
      v = {R * std::cos(th), R * std::sin(th)};
      vals[static_cast<std::size_t>(i)] = p(v);
      out.max_on_sphere = std::max(out.max_on_sphere, std::abs(vals[static_cast<std::size_t>(i)]));
    }
    for (int k = -deg; k <= deg; ++k) {
      cplx a{0.0, 0.0};
      for (int i = 0; i < n; ++i) a += vals[static_cast<std::size_t>(i)] * expi2pi(-static_cast<double>(k * i) / n);
      a /= static_cast<double>(n);
      out.rhs += std::norm(a);
      if (k == 0) out.a0 = a.real();
    }
    for (const auto& nd : quad::composite_legendre(0.0, kTwoPi, 2 + deg / 4)) {
      v = {R * std::cos(nd.x), R * std::sin(nd.x)};
      const double f = p(v);
      out.lhs += nd.w * f * f / kTwoPi;
    }
  } else {
    // Gauss-Legendre in cos(theta) times a trapezoid in phi: exact for the
    // degree-2 deg products p * Y_lm.
    const auto gl = quad::gauss_jacobi(deg + 2, 0.0, 0.0);
    const int nphi = 2 * deg + 4;
    struct Node3 {
      double ct, phi, w, val;
    };
    std::vector<Node3> nodes;
    for (const auto& g : gl) {
      const double st = std::sqrt(std::max(0.0, 1.0 - g.x * g.x));
      for (int j = 0; j < nphi; ++j) {
        const double phi = kTwoPi * j / nphi;
        v = {R * st * std::cos(phi), R * st * std::sin(phi), R * g.x};
        const double f = p(v);
        out.max_on_sphere = std::max(out.max_on_sphere, std::abs(f));
        nodes.push_back({g.x, phi, 0.5 * g.w / nphi, f});
      }
    }
    const double norm = std::sqrt(4.0 * kPi);
    for (int l = 0; l <= deg; ++l) {
      for (int m = -l; m <= l; ++m) {
        double a = 0.0;
        for (const auto& nd : nodes) {
          const double leg = norm * std::sph_legendre(l, std::abs(m), std::acos(nd.ct));
          double y = leg;
          if (m > 0) y = std::sqrt(2.0) * leg * std::cos(m * nd.phi);
          if (m < 0) y = std::sqrt(2.0) * leg * std::sin(-m * nd.phi);
          a += nd.w * nd.val * y;
        }
        out.rhs += a * a;
        if (l == 0) out.a0 = a;
      }
    }
    // lhs by an unrelated product rule in (theta, phi).
    const auto th = quad::composite_legendre(0.0, kPi, 2 + deg / 4);
    const auto ph = quad::composite_legendre(0.0, kTwoPi, 2 + deg / 4);
    for (const auto& a : th) {
      for (const auto& b : ph) {
        v = {R * std::sin(a.x) * std::cos(b.x), R * std::sin(a.x) * std::sin(b.x), R * std::cos(a.x)};
        const double f = p(v);
        out.lhs += a.w * b.w * std::sin(a.x) * f * f / (4.0 * kPi);
      }
    }
  }
  out.a0_dominates = std::abs(out.a0) >= std::abs(out.p0) * (1.0 - 1e-12);
  out.max_dominates = out.max_on_sphere >= std::abs(out.p0) * (1.0 - 1e-12);
  return out;
}

GammaEstimate estimate_gamma_prime(const Space& space, const Observable& f, const Point& x,
                                   std::span<const double> R_grid, const std::vector<std::vector<double>>& z_set,
                                   const QuadratureScheme& scheme) {
  if (R_grid.size() < 6) throw ParameterError("gamma' estimation needs at least 6 radii");
  if (z_set.empty()) throw ParameterError("gamma' estimation needs at least one twist frequency");
  if (!regularity(space, f).mean_zero) throw ParameterError("gamma' estimation needs a mean-zero observable");
  GammaEstimate out;
  // Radii in order; worst case over z is a max, so the fold is order-independent.
  for (double R : R_grid) {
    DecayPoint worst{R, {0.0, 0.0}, 0.0};
    for (const auto& z : z_set) {
      const AverageResult a = twisted_ball_average(space, f, x, R, z, scheme);
      if (std::abs(a.value) > std::abs(worst.value)) {
        worst.value = a.value;
        worst.error = a.error;
      }
    }
    out.series.push_back(worst);
  }
  try {
    out.fit = decay_fit(out.series);
    out.gamma_prime = -out.fit->exponent;
    out.no_disjointness = out.fit->exponent > -0.05;
  } catch (const FitRefused& e) {
    out.refused = e.what();
    out.no_disjointness = true;
  }
  return out;
}

double smoothing_tv_distance(Family family, double R, double param, double delta) {
  if (!(R > 0.0) || !(delta > 0.0)) throw ParameterError("R and delta must be positive");
  // Even measure on the line through its CDF.
  double lo = 0.0, hi = 0.0;
  std::function<double(double)> cdf;
  if (family == Family::annulus) {
    if (!(param > 0.0 && param <= 1.0)) throw ParameterError("omega must lie in (0, 1]");
    const double a = 0.5 * R, b = 0.5 * R + std::pow(R, param);
    lo = -b;
    hi = b;
    cdf = [a, b](double v) {
      const double u = std::abs(v);
      const double half = 0.5 * std::clamp((u - a) / (b - a), 0.0, 1.0);
      return v < 0.0 ? 0.5 - half : 0.5 + half;
    };
  } else if (family == Family::bochner_riesz || family == Family::ball) {
    const double alpha = family == Family::ball ? 0.0 : param;
    if (!(alpha > -1.0)) throw SingularOrder("Bochner-Riesz order alpha must exceed -1");
    lo = -R;
    hi = R;
    cdf = [R, alpha](double v) {
      const double t = std::clamp(0.5 * (v / R + 1.0), 0.0, 1.0);
      return boost::math::ibeta(alpha + 1.0, alpha + 1.0, t);
    };
  } else {
    throw Unsupported("smoothing_tv_distance supports annulus, ball and bochner_riesz");
  }
  // Cell masses on a grid of width delta / 400, convolved with the sampled mollifier.
  const double h = delta / 400.0;
  const int taps = 400;
  std::vector<double> phi(2 * taps + 1);
  double psum = 0.0;
  for (int k = -taps; k <= taps; ++k) {
    phi[static_cast<std::size_t>(k + taps)] = kernels::mollifier_profile(std::abs(k) / static_cast<double>(taps));
    psum += phi[static_cast<std::size_t>(k + taps)];
  }
  for (double& w : phi) w /= psum;
  const double a = lo - delta - h, b = hi + delta + h;
  const auto cells = static_cast<std::size_t>(std::ceil((b - a) / h));
  std::vector<double> mass(cells);
  double prev = cdf(a);
  for (std::size_t i = 0; i < cells; ++i) {
    const double next = cdf(a + (i + 1) * h);
    mass[i] = next - prev;
    prev = next;
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    double conv = 0.0;
    for (int k = -taps; k <= taps; ++k) {
      const auto j = static_cast<std::ptrdiff_t>(i) - k;
      if (j < 0 || j >= static_cast<std::ptrdiff_t>(cells)) continue;
      conv += phi[static_cast<std::size_t>(k + taps)] * mass[static_cast<std::size_t>(j)];
    }
    tv += std::abs(mass[i] - conv);
  }
  return tv;
}

std::vector<double> geometric_grid(double R_min, double R_max, int count) {
  if (count < 1) throw ParameterError("grid needs at least one point");
  if (!(R_min > 0.0) || !(R_max >= R_min)) throw ParameterError("grid needs 0 < R_min <= R_max");
  if (count == 1) return {R_min};
  std::vector<double> out;
  const double ratio = std::log(R_max / R_min) / (count - 1);
  for (int i = 0; i < count; ++i) out.push_back(R_min * std::exp(ratio * i));
  out.back() = R_max;
  return out;
}

}  // namespace speq
