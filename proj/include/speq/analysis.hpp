#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "speq/averages.hpp"
#include "speq/numeric.hpp"
#include "speq/observables.hpp"
#include "speq/spaces.hpp"

namespace speq {

struct DecayPoint {
  double R = 1.0;
  cplx value{0.0, 0.0};
  double error = 0.0;
};

using DecaySeries = std::vector<DecayPoint>;

/// Least-squares line log|value| = intercept + exponent * log R.
struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the exponent
  std::size_t points = 0;   // usable points
  std::size_t dropped = 0;  // points at the noise floor
};

/// Points with |value| < noise_factor * error (or value 0) are dropped; fewer than
/// four usable points raises FitRefused. R must be strictly increasing.
DecayFit decay_fit(const DecaySeries& series, double noise_factor = 10.0);

struct OmegaPrediction {
  double value = 1.0;
  bool clamped = false;  // the formula gave a value <= 0; value is then 0
};

/// 1 - 2 gamma' / (d^2 + 3d + 4).
OmegaPrediction predict_omega_critical(int d, double gamma_prime);

/// R^{-2 gamma' / (d^2 + 3d + 4)}.
double choose_delta_annulus(int d, double gamma_prime, double R);

struct RatePrediction {
  double value = 0.0;
  bool singular = false;  // alpha = -1: the smoothing error does not vanish
};

/// gamma' (1 + alpha) / ((d + 1)(d - alpha)), alpha in [-1, d).
RatePrediction predict_br_rate(int d, double alpha, double gamma_prime);

/// Default truncation exponent L = d + 2.
int default_truncation_exponent(int d);

/// delta^{-L}; L <= 0 means the default.
double truncation_radius(double delta, int d, double L = 0.0);

/// sum over n in Z^d with |n|_inf >= delta^{-L} of (delta |n|_inf)^{-(d+1)},
/// summed exactly by shells through Hurwitz zeta values.
double truncation_tail(double delta, int d, double L = 0.0);

/// Real polynomial on R^d as a list of monomials.
struct Polynomial {
  int d = 2;
  struct Term {
    std::vector<int> exponents;
    double coeff = 0.0;
  };
  std::vector<Term> terms;

  double operator()(std::span<const double> v) const;
  int degree() const;
};

struct ParsevalResult {
  double lhs = 0.0;  // mean of |p|^2 over the sphere of radius R
  double rhs = 0.0;  // sum of squared expansion coefficients
  double a0 = 0.0;   // constant term of the expansion
  double p0 = 0.0;   // p(0)
  double max_on_sphere = 0.0;
  bool a0_dominates = false;   // |a0| >= |p(0)|
  bool max_dominates = false;  // max |p| on the sphere >= |p(0)|
};

/// Expands p restricted to the sphere of radius R in Fourier modes (d = 2) or
/// real spherical harmonics (d = 3), orthonormal for the unit-mass measure.
ParsevalResult parseval_check(const Polynomial& p, double R);

struct GammaEstimate {
  DecaySeries series;  // R, worst-case |twisted average| over z
  std::optional<DecayFit> fit;
  std::string refused;  // reason when fit is empty
  double gamma_prime = 0.0;
  bool no_disjointness = false;  // fit refused, or exponent above -0.05
};

/// Worst case over z_set of |twisted_ball_average| on R_grid (>= 6 points), fitted.
GammaEstimate estimate_gamma_prime(const Space& space, const Observable& f, const Point& x,
                                   std::span<const double> R_grid, const std::vector<std::vector<double>>& z_set,
                                   const QuadratureScheme& scheme);

/// Total-variation distance between a one-dimensional averaging measure and its
/// convolution with phi_delta: annulus (uniform on R/2 <= |v| <= R/2 + R^omega) or
/// Bochner-Riesz (density ~ (1 - (v/R)^2)^alpha). This is the operator norm of
/// A - A * phi_delta on bounded functions.
double smoothing_tv_distance(Family family, double R, double param, double delta);

/// `count` geometrically spaced points from R_min to R_max inclusive.
std::vector<double> geometric_grid(double R_min, double R_max, int count);

}  // namespace speq
