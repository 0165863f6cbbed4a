#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>

namespace speq {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e(t) = exp(2 pi i t).
inline cplx expi2pi(double t) {
  // Reduce first so large phases keep full precision.
  const double r = t - std::nearbyint(t);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

/// Representative of t mod 1 in [0, 1).
inline double frac(double t) {
  double r = t - std::floor(t);
  if (r >= 1.0) r = 0.0;  // t = -tiny rounds up to 1
  return r;
}

/// Distance from t to the nearest integer.
inline double circle_dist(double a, double b) {
  const double t = a - b;
  return std::abs(t - std::nearbyint(t));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Surface area of the unit sphere S^{d-1}.
inline double unit_sphere_area(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

// Counter-based generator: the k-th draw of stream `seed` depends only on
// (seed, k), so quadrature nodes are independent of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace speq
