#include "speq/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "speq/error.hpp"
#include "speq/numeric.hpp"
#include "speq/quadrature.hpp"

namespace speq::kernels {

BesselOrder BesselOrder::halves(int k) {
  if (k < -1) throw UnsupportedOrder("Bessel order " + std::to_string(k) + "/2 is below -1/2");
  return BesselOrder(k);
}

namespace {

// sum_k (-1)^k (x^2/4)^k / (k! (nu+1)_k)
double lambda_series(double nu, double x, int terms) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < terms; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel expansion J_nu(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi),
// truncated before the terms start to grow.
double hankel_j(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (k * 8.0 * x);
    if (next == 0.0) break;
    if (std::abs(next) >= last) break;
    last = std::abs(next);
    term = next;
    // Terms alternate between Q (odd k) and P (even k) with signs + - - + + ...
    const int phase = k % 4;
    if (phase == 1) q += term;
    else if (phase == 2) p -= term;
    else if (phase == 3) q -= term;
    else p += term;
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_j_large(double nu, double x) {
  if (nu < 0.0) return hankel_j(nu, x);
  if (nu >= x) {
    throw UnsupportedOrder("Bessel order " + std::to_string(nu) +
                           " exceeds the argument in the asymptotic branch");
  }
  const double base = nu - std::floor(nu);
  const int steps = static_cast<int>(std::floor(nu));
  double prev = hankel_j(base, x);
  if (steps == 0) return prev;
  double cur = hankel_j(base + 1.0, x);
  for (int k = 1; k < steps; ++k) {
    const double order = base + k;
    const double next = 2.0 * order / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void check_order(double nu) {
  if (!(nu >= -0.5)) {
    throw UnsupportedOrder("Bessel order " + std::to_string(nu) + " is below -1/2");
  }
}

}  // namespace

double bessel_j(double nu, double x) {
  check_order(nu);
  if (!(x >= 0.0)) throw ParameterError("bessel_j: argument must be nonnegative");
  if (x < kSeriesCrossover) {
    if (x == 0.0) {
      if (nu == 0.0) return 1.0;
      if (nu > 0.0) return 0.0;
      return std::numeric_limits<double>::infinity();
    }
    const double prefactor = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    return prefactor * lambda_series(nu, x, kSeriesTerms);
  }
  return bessel_j_large(nu, x);
}

double bessel_j(BesselOrder order, double x) { return bessel_j(order.value(), x); }

double bessel_lambda(double nu, double x) {
  if (!(nu > -1.0)) throw UnsupportedOrder("bessel_lambda: order must exceed -1");
  if (!(x >= 0.0)) throw ParameterError("bessel_lambda: argument must be nonnegative");
  if (x < kSeriesCrossover) return lambda_series(nu, x, kSeriesTerms);
  const double j = bessel_j_large(nu, x);
  return std::exp(std::lgamma(nu + 1.0) + nu * std::log(2.0 / x)) * j;
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::ball: return "ball";
    case KernelKind::sphere: return "sphere";
    case KernelKind::annulus: return "annulus";
    case KernelKind::bochner_riesz: return "bochner_riesz";
    case KernelKind::mollifier: return "mollifier";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "ball") return KernelKind::ball;
  if (name == "sphere") return KernelKind::sphere;
  if (name == "annulus") return KernelKind::annulus;
  if (name == "bochner_riesz" || name == "br") return KernelKind::bochner_riesz;
  if (name == "mollifier") return KernelKind::mollifier;
  throw ParameterError("unknown kernel kind '" + std::string(name) + "'");
}

namespace {

void check_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("kernel radius must be finite and >= 0");
}

// Unit-mass sphere S^{d-1}; d = 1 is the two-point set {-1, 1}.
double sphere_kernel_any(int d, double r) {
  if (d == 1) return std::cos(kTwoPi * r);
  return bessel_lambda(0.5 * d - 1.0, kTwoPi * r);
}

}  // namespace

double sphere_kernel(int d, double r) {
  if (d < 2) throw DimensionError("sphere_kernel: dimension must be at least 2");
  check_radius(r);
  return sphere_kernel_any(d, r);
}

double ball_kernel(int d, double r) {
  if (d < 1) throw DimensionError("ball_kernel: dimension must be at least 1");
  check_radius(r);
  return bessel_lambda(0.5 * d, kTwoPi * r);
}

double br_kernel(int d, double alpha, double r) {
  if (d < 1) throw DimensionError("br_kernel: dimension must be at least 1");
  if (!(alpha > -1.0)) throw SingularOrder("br_kernel: order alpha must exceed -1");
  check_radius(r);
  return bessel_lambda(0.5 * d + alpha, kTwoPi * r);
}

double annulus_kernel(int d, double R, double omega, double r) {
  if (d < 2) throw DimensionError("annulus_kernel: dimension must be at least 2");
  if (!(R > 0.0)) throw ParameterError("annulus_kernel: R must be positive");
  if (!(omega > 0.0 && omega <= 1.0)) throw ParameterError("annulus_kernel: omega must lie in (0, 1]");
  check_radius(r);
  if (r == 0.0) return 1.0;
  const double width = std::pow(R, omega);
  const auto integrand = [&](double t) { return sphere_kernel_any(d, (0.5 * R + t) * r); };
  const int panels = 8 + static_cast<int>(std::ceil(2.0 * width * r));
  return quad::adaptive_simpson(integrand, 0.0, width, 1e-9 * width, panels) / width;
}

double mollifier_profile(double s) {
  const double t = 1.0 - s * s;
  if (t <= 0.0) return 0.0;
  return std::exp(-1.0 / t);
}

namespace {

double profile_moment(int d) {
  double sum = 0.0;
  for (const auto& nd : quad::composite_legendre(0.0, 1.0, 4)) {
    sum += nd.w * mollifier_profile(nd.x) * std::pow(nd.x, d - 1);
  }
  return sum;
}

}  // namespace

double mollifier_normalization(int d) {
  if (d < 1) throw DimensionError("mollifier: dimension must be at least 1");
  return 1.0 / (unit_sphere_area(d) * profile_moment(d));
}

double mollifier_kernel(int d, double delta, double r) {
  if (d < 1) throw DimensionError("mollifier_kernel: dimension must be at least 1");
  if (!(delta > 0.0)) throw ParameterError("mollifier_kernel: delta must be positive");
  check_radius(r);
  if (r == 0.0) return 1.0;
  const double rho = delta * r;
  const int panels = 4 + quad::panels_for(8.0 * rho);
  double num = 0.0;
  double den = 0.0;
  for (const auto& nd : quad::composite_legendre(0.0, 1.0, panels)) {
    const double w = nd.w * mollifier_profile(nd.x) * std::pow(nd.x, d - 1);
    num += w * sphere_kernel_any(d, rho * nd.x);
    den += w;
  }
  return num / den;
}

double RadialKernel::operator()(double r) const {
  switch (kind) {
    case KernelKind::ball: return ball_kernel(d, r);
    case KernelKind::sphere: return sphere_kernel(d, r);
    case KernelKind::annulus: return annulus_kernel(d, R, omega, r);
    case KernelKind::bochner_riesz: return br_kernel(d, alpha, r);
    case KernelKind::mollifier: return mollifier_kernel(d, delta, r);
  }
  return 0.0;
}

Envelope kernel_envelope(KernelKind kind, int d, double alpha) {
  if (d < 1) throw DimensionError("kernel_envelope: dimension must be at least 1");
  switch (kind) {
    case KernelKind::sphere:
      if (d < 2) throw DimensionError("sphere envelope needs d >= 2");
      return {0.5 * (d - 1), "(d-1)/2 in |z|"};
    case KernelKind::ball:
      return {0.5 * (d + 1), "(d+1)/2 in |z|"};
    case KernelKind::annulus:
      if (d < 2) throw DimensionError("annulus envelope needs d >= 2");
      return {0.5 * (d - 1), "(d-1)/2 in |R z|; an upper bound, thickness averaging decays faster"};
    case KernelKind::bochner_riesz:
      if (!(alpha > -1.0)) throw SingularOrder("bochner_riesz envelope needs alpha > -1");
      return {0.5 * (d + 1) + alpha, "(d+1)/2 + alpha in |z|"};
    case KernelKind::mollifier:
      return {std::numeric_limits<double>::infinity(), "superpolynomial: (delta |z|)^{-K} for every K"};
  }
  return {0.0, ""};
}

}  // namespace speq::kernels
