#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "speq/numeric.hpp"
#include "speq/observables.hpp"
#include "speq/spaces.hpp"

namespace speq {

enum class QuadratureKind { grid, low_discrepancy, monte_carlo };

std::string_view to_string(QuadratureKind kind);
QuadratureKind quadrature_kind_from_string(std::string_view name);

/// Node budget: a radial interval of length L carrying bandwidth B gets
/// ceil(1.5 * density * B * L) + min_nodes nodes, and a great circle of radius r
/// gets ceil(0.4 * density * 2 pi B r) + min_nodes. Spheres use a trapezoid rule
/// (d = 2), Gauss-Legendre in theta times a trapezoid in phi (d = 3), and Halton
/// directions (d >= 4, at most 2^16 per shell); radii use composite 20-point
/// Gauss-Legendre. The error estimate is the change when the average is
/// recomputed with coarse(): 3/4 of the density and of min_nodes, which still
/// resolves band-limited integrands at the default density.
struct QuadratureScheme {
  QuadratureKind kind = QuadratureKind::grid;
  double density = 4.0;
  int min_nodes = 24;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double max_nodes = 5e8;  // CapacityError beyond this
  bool estimate_error = true;

  QuadratureScheme coarse() const;
};

struct AverageResult {
  cplx value{0.0, 0.0};
  double error = 0.0;
  bool degenerate = false;  // sphere "average" in d = 1 (two points)
  double nodes = 0.0;       // integrand evaluations, both passes
};

enum class Family { ball, sphere, annulus, bochner_riesz, tangent_patch };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

struct AverageSpec {
  Family family = Family::ball;
  double R = 1.0;
  double omega = 1.0;               // annulus
  double alpha = 0.0;               // bochner_riesz
  double beta = 0.5;                // tangent_patch
  double delta = 0.0;               // 0 = unmollified
  std::vector<double> direction;    // tangent_patch, unit vector
  QuadratureScheme scheme;
};

/// Throws ParameterError / SingularOrder / DimensionError on invalid parameters.
void validate(const AverageSpec& spec, int d);

AverageResult ball_average(const Space& space, const Observable& f, const Point& x, double R,
                           const QuadratureScheme& scheme);

AverageResult sphere_average(const Space& space, const Observable& f, const Point& x, double R,
                             const QuadratureScheme& scheme);

AverageResult annulus_average(const Space& space, const Observable& f, const Point& x, double R,
                              double omega, const QuadratureScheme& scheme);

AverageResult br_average(const Space& space, const Observable& f, const Point& x, double R, double alpha,
                         const QuadratureScheme& scheme);

/// Flat average over the (d-1)-ball of radius R^beta orthogonal to `direction`,
/// centered at R * direction.
AverageResult tangent_patch_average(const Space& space, const Observable& f, const Point& x, double R,
                                    double beta, std::span<const double> direction,
                                    const QuadratureScheme& scheme);

/// Sphere-rule combination of tangent patches over `directions` unit directions.
AverageResult patch_combination_average(const Space& space, const Observable& f, const Point& x, double R,
                                        double beta, std::size_t directions, const QuadratureScheme& scheme);

/// The average described by `spec` (delta ignored).
AverageResult base_average(const Space& space, const Observable& f, const Point& x, const AverageSpec& spec);

/// The average of `spec` convolved with phi_delta on the acting group:
/// int phi_delta(w) A f(u_w x) dw, by an outer quadrature over the mollifier.
AverageResult mollified_average(const Space& space, const Observable& f, const Point& x,
                                const AverageSpec& spec, double delta);

/// base_average when spec.delta == 0, mollified_average otherwise.
AverageResult average(const Space& space, const Observable& f, const Point& x, const AverageSpec& spec);

/// (1/vol B_R) int_{|v| <= R} f(u_v x) e(<v, z>) dv.
AverageResult twisted_ball_average(const Space& space, const Observable& f, const Point& x, double R,
                                   std::span<const double> z, const QuadratureScheme& scheme);

/// a_{n,R} = (2R)^{-d} int_{|v| <= R} f(u_v x) e(-<v/R, n/2>) dv, the Fourier
/// coefficient of the model function on [-1,1]^d (zero outside the unit ball).
AverageResult model_fourier_coefficient(const Space& space, const Observable& f, const Point& x, double R,
                                        std::span<const int> n, const QuadratureScheme& scheme);

}  // namespace speq
