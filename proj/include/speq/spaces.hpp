#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace speq {

enum class SpaceKind { torus, heisenberg, modular };

std::string_view to_string(SpaceKind kind);

/// T^n with R^d acting through an n x d matrix: v.x = x + A v mod 1.
struct TorusSpace {
  int n = 2;
  int d = 2;
  std::vector<double> action;  // row-major n x d

  double a(int i, int j) const { return action[static_cast<std::size_t>(i * d + j)]; }
};

/// Builds a torus space; the action matrix must have full column rank d <= n.
TorusSpace make_torus(int n, int d, std::vector<double> action);
TorusSpace identity_torus(int n);

struct HeisenbergFactor {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Product of d copies of H(R)/H(Z); the i-th flow coordinate moves factor i by
/// u(t) = exp(t (0 alpha gamma; 0 0 beta; 0 0 0)) acting on the left.
struct HeisenbergProductSpace {
  std::vector<HeisenbergFactor> factors;
  bool minimal = true;
};

/// Product of d copies of SL(2,R)/SL(2,Z) (lattices g Z^2); coordinate i acts on
/// factor i by the horocycle [[1, t], [0, 1]] on the left.
struct ModularProductSpace {
  int d = 1;
};

struct Space {
  std::variant<TorusSpace, HeisenbergProductSpace, ModularProductSpace> body;

  SpaceKind kind() const;
  /// Dimension of the acting group R^d.
  int action_dim() const;
  /// Number of stored coordinates per point.
  int coord_count() const;

  const TorusSpace& torus() const;
  const HeisenbergProductSpace& heisenberg() const;
  const ModularProductSpace& modular() const;
};

/// A point in canonical (reduced) coordinates.
///  torus: n reals in [0,1);
///  heisenberg: (x, y, z) per factor in [0,1)^3;
///  modular: row-major 2x2 matrix (a, b, c, d) per factor, Lagrange-reduced columns.
struct Point {
  SpaceKind kind = SpaceKind::torus;
  std::vector<double> c;
};

/// u_v.x, reduced. Throws InputError for non-finite v, DimensionError for a
/// size mismatch.
Point translate(const Space& space, const Point& x, std::span<const double> v);

/// Same as translate, writing into `out` (reuses its storage).
void translate_into(const Space& space, const Point& x, std::span<const double> v, Point& out);

/// Canonical representative of a raw point given in covering-group coordinates.
Point reduce(const Space& space, const Point& raw);

/// Checks shape and, for modular points, the determinant (InvalidPoint).
void validate_point(const Space& space, const Point& x);

using Mat3 = std::array<double, 9>;  // row-major

Mat3 heisenberg_flow_matrix(double alpha, double beta, double gamma, double t);

/// Group law (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y').
std::array<double, 3> heisenberg_mul(const std::array<double, 3>& g, const std::array<double, 3>& h);
std::array<double, 3> heisenberg_inv(const std::array<double, 3>& g);
/// u(t) = exp(t X) in coordinates.
std::array<double, 3> heisenberg_flow(const HeisenbergFactor& f, double t);

/// (x_i, y_i) per factor, as a point of T^{2d}.
Point horizontal_proj(const Space& space, const Point& x);

/// Deterministic Haar-distributed point. Torus and Heisenberg: uniform in
/// coordinates. Modular: tau = x + iy drawn exactly from dx dy / y^2 on the
/// standard fundamental domain by rejection, with a uniform rotation.
Point haar_sample(const Space& space, std::uint64_t seed);

using Mat2 = std::array<double, 4>;  // row-major (a, b, c, d)

/// Lagrange reduction of the columns, SL(2,Z)-equivalent, det renormalized to 1.
Mat2 reduce_lattice(const Mat2& g);
double shortest_vector(const Mat2& g);
double shortest_vector(const Point& x, int factor);
Mat2 modular_factor(const Point& x, int factor);

/// Flat distance on canonical coordinates: per-coordinate circle distance for
/// torus/Heisenberg; Frobenius distance after aligning lattice bases for modular.
double distance(const Space& space, const Point& x, const Point& y);

/// Equality of points on the quotient up to `tol`.
bool same_point(const Space& space, const Point& x, const Point& y, double tol = 1e-10);

nlohmann::json point_to_json(const Point& x);
Point point_from_json(const nlohmann::json& j);

}  // namespace speq
