#pragma once

#include <string>
#include <string_view>

namespace speq::kernels {

/// Bessel order restricted to half-integers k/2, k >= -1.
class BesselOrder {
public:
  static BesselOrder halves(int k);
  double value() const { return 0.5 * twice_; }
  int twice() const { return twice_; }

private:
  explicit BesselOrder(int twice) : twice_(twice) {}
  int twice_;
};

// Below the crossover J_nu is summed from its power series (kSeriesTerms
// terms); at and above it the Hankel asymptotic expansion is used, truncated
// at its smallest term, followed by upward recurrence in the order.
inline constexpr double kSeriesCrossover = 12.0;
inline constexpr int kSeriesTerms = 40;

/// J_nu(x) for real nu >= -1/2 and x >= 0.
double bessel_j(double nu, double x);
double bessel_j(BesselOrder order, double x);

/// Gamma(nu + 1) (2/x)^nu J_nu(x): the entire, unit-normalized Bessel
/// function. Defined for nu > -1; equals 1 at x = 0.
double bessel_lambda(double nu, double x);

enum class KernelKind { ball, sphere, annulus, bochner_riesz, mollifier };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

// All kernels use the convention hat(mu)(z) = int e^{-2 pi i <v, z>} dmu(v)
// for a unit-mass measure mu, evaluated at |z| = r.
double sphere_kernel(int d, double r);
double ball_kernel(int d, double r);
double annulus_kernel(int d, double R, double omega, double r);
double br_kernel(int d, double alpha, double r);
double mollifier_kernel(int d, double delta, double r);

/// Unnormalized radial profile exp(-1 / (1 - s^2)) of the mollifier, s in [0, 1).
double mollifier_profile(double s);

/// Constant c_d making c_d * mollifier_profile(|v|) a probability density on R^d.
double mollifier_normalization(int d);

/// Radial kernel descriptor; parameters not used by `kind` are ignored.
struct RadialKernel {
  KernelKind kind = KernelKind::ball;
  int d = 2;
  double R = 1.0;      // annulus
  double omega = 1.0;  // annulus
  double alpha = 0.0;  // bochner_riesz
  double delta = 1.0;  // mollifier

  double operator()(double r) const;
};

struct Envelope {
  double exponent;  // |kernel(r)| << r^{-exponent} for r >= 1
  std::string note;
};

Envelope kernel_envelope(KernelKind kind, int d, double alpha = 0.0);

}  // namespace speq::kernels
