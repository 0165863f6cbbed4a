#include "speq/spaces.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "speq/error.hpp"
#include "speq/numeric.hpp"

namespace speq {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::torus: return "torus";
    case SpaceKind::heisenberg: return "heisenberg";
    case SpaceKind::modular: return "modular";
  }
  return "unknown";
}

TorusSpace make_torus(int n, int d, std::vector<double> action) {
  if (n < 1 || d < 1) throw DimensionError("torus: n and d must be positive");
  if (d > n) throw DimensionError("torus: acting dimension d exceeds n");
  if (action.size() != static_cast<std::size_t>(n) * d) {
    throw DimensionError("torus: action matrix must have n*d entries");
  }
  for (double a : action) {
    if (!std::isfinite(a)) throw ParameterError("torus: action matrix entries must be finite");
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      action.data(), n, d);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (lu.rank() < d) throw ParameterError("torus: action matrix must have full column rank");
  return TorusSpace{n, d, std::move(action)};
}

TorusSpace identity_torus(int n) {
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i * n + i)] = 1.0;
  return make_torus(n, n, std::move(a));
}

SpaceKind Space::kind() const {
  return static_cast<SpaceKind>(body.index());
}

int Space::action_dim() const {
  switch (kind()) {
    case SpaceKind::torus: return torus().d;
    case SpaceKind::heisenberg: return static_cast<int>(heisenberg().factors.size());
    case SpaceKind::modular: return modular().d;
  }
  return 0;
}

int Space::coord_count() const {
  switch (kind()) {
    case SpaceKind::torus: return torus().n;
    case SpaceKind::heisenberg: return 3 * static_cast<int>(heisenberg().factors.size());
    case SpaceKind::modular: return 4 * modular().d;
  }
  return 0;
}

const TorusSpace& Space::torus() const {
  if (const auto* t = std::get_if<TorusSpace>(&body)) return *t;
  throw TypeMismatch("expected a torus space");
}

const HeisenbergProductSpace& Space::heisenberg() const {
  if (const auto* h = std::get_if<HeisenbergProductSpace>(&body)) return *h;
  throw TypeMismatch("expected a Heisenberg product space");
}

const ModularProductSpace& Space::modular() const {
  if (const auto* m = std::get_if<ModularProductSpace>(&body)) return *m;
  throw TypeMismatch("expected a modular product space");
}

namespace {

void check_shape(const Space& space, const Point& x) {
  if (x.kind != space.kind()) {
    throw TypeMismatch(std::string("point of a ") + std::string(to_string(x.kind)) +
                       " space used with a " + std::string(to_string(space.kind())) + " space");
  }
  if (static_cast<int>(x.c.size()) != space.coord_count()) {
    throw DimensionError("point has " + std::to_string(x.c.size()) + " coordinates, expected " +
                         std::to_string(space.coord_count()));
  }
}

void check_flow(const Space& space, std::span<const double> v) {
  if (static_cast<int>(v.size()) != space.action_dim()) {
    throw DimensionError("flow vector has " + std::to_string(v.size()) + " entries, expected " +
                         std::to_string(space.action_dim()));
  }
  for (double t : v) {
    if (!std::isfinite(t)) throw InputError("flow vector entries must be finite");
  }
}

// Right multiplication by the lattice element that brings (x, y, z) into [0,1)^3.
void reduce_heisenberg(double& x, double& y, double& z) {
  const double fx = std::floor(x);
  x -= fx;
  if (x >= 1.0) x = 0.0;
  const double fy = std::floor(y);
  y -= fy;
  if (y >= 1.0) y = 0.0;
  z = frac(z - x * fy);
}

double det2(const Mat2& g) { return g[0] * g[3] - g[1] * g[2]; }

}  // namespace

Mat2 reduce_lattice(const Mat2& g) {
  // Columns b1 = (a, c), b2 = (b, d).
  double x1 = g[0], y1 = g[2], x2 = g[1], y2 = g[3];
  double n1 = x1 * x1 + y1 * y1;
  double n2 = x2 * x2 + y2 * y2;
  const auto rotate = [&] {  // (b1, b2) <- (b2, -b1) keeps the determinant
    const double tx = x1, ty = y1;
    x1 = x2;
    y1 = y2;
    x2 = -tx;
    y2 = -ty;
    std::swap(n1, n2);
  };
  if (n2 < n1) rotate();
  for (int it = 0; it < 4096; ++it) {
    const double mu = std::nearbyint((x1 * x2 + y1 * y2) / n1);
    if (mu != 0.0) {
      x2 -= mu * x1;
      y2 -= mu * y1;
      n2 = x2 * x2 + y2 * y2;
    }
    if (n2 >= n1) break;
    rotate();
  }
  if (x1 < 0.0 || (x1 == 0.0 && y1 < 0.0)) {
    x1 = -x1;
    y1 = -y1;
    x2 = -x2;
    y2 = -y2;
  }
  Mat2 out{x1, x2, y1, y2};
  const double det = det2(out);
  if (!(det > 0.0)) throw InvalidPoint("lattice basis is degenerate");
  const double s = 1.0 / std::sqrt(det);
  for (double& e : out) e *= s;
  return out;
}

double shortest_vector(const Mat2& g) {
  const Mat2 r = reduce_lattice(g);
  return std::hypot(r[0], r[2]);
}

Mat2 modular_factor(const Point& x, int factor) {
  const auto k = static_cast<std::size_t>(4 * factor);
  return {x.c[k], x.c[k + 1], x.c[k + 2], x.c[k + 3]};
}

double shortest_vector(const Point& x, int factor) {
  if (x.kind != SpaceKind::modular) throw TypeMismatch("shortest_vector needs a modular point");
  if (factor < 0 || 4 * factor + 3 >= static_cast<int>(x.c.size())) {
    throw DimensionError("modular factor index out of range");
  }
  // Canonical points already carry a reduced basis: the first column is shortest.
  const auto k = static_cast<std::size_t>(4 * factor);
  return std::hypot(x.c[k], x.c[k + 2]);
}

void validate_point(const Space& space, const Point& x) {
  check_shape(space, x);
  for (double t : x.c) {
    if (!std::isfinite(t)) throw InvalidPoint("point coordinates must be finite");
  }
  if (space.kind() == SpaceKind::modular) {
    for (int i = 0; i < space.modular().d; ++i) {
      const double det = det2(modular_factor(x, i));
      if (std::abs(det - 1.0) > 1e-9) {
        throw InvalidPoint("modular factor " + std::to_string(i) + " has determinant " + std::to_string(det));
      }
    }
  }
}

Point reduce(const Space& space, const Point& raw) {
  validate_point(space, raw);
  Point out = raw;
  switch (space.kind()) {
    case SpaceKind::torus:
      for (double& t : out.c) t = frac(t);
      break;
    case SpaceKind::heisenberg:
      for (std::size_t k = 0; k < out.c.size(); k += 3) reduce_heisenberg(out.c[k], out.c[k + 1], out.c[k + 2]);
      break;
    case SpaceKind::modular:
      for (int i = 0; i < space.modular().d; ++i) {
        const Mat2 r = reduce_lattice(modular_factor(raw, i));
        std::copy(r.begin(), r.end(), out.c.begin() + 4 * i);
      }
      break;
  }
  return out;
}

void translate_into(const Space& space, const Point& x, std::span<const double> v, Point& out) {
  check_shape(space, x);
  check_flow(space, v);
  out.kind = x.kind;
  out.c.resize(x.c.size());
  switch (space.kind()) {
    case SpaceKind::torus: {
      const auto& t = space.torus();
      for (int i = 0; i < t.n; ++i) {
        double s = x.c[static_cast<std::size_t>(i)];
        for (int j = 0; j < t.d; ++j) s += t.a(i, j) * v[static_cast<std::size_t>(j)];
        out.c[static_cast<std::size_t>(i)] = frac(s);
      }
      break;
    }
    case SpaceKind::heisenberg: {
      const auto& h = space.heisenberg();
      for (std::size_t i = 0; i < h.factors.size(); ++i) {
        const auto& f = h.factors[i];
        const double t = v[i];
        const double xi = x.c[3 * i], yi = x.c[3 * i + 1], zi = x.c[3 * i + 2];
        // u(t) (x, y, z) with u(t) = (t alpha, t beta, t gamma + t^2 alpha beta / 2).
        double nx = t * f.alpha + xi;
        double ny = t * f.beta + yi;
        double nz = t * f.gamma + 0.5 * t * t * f.alpha * f.beta + zi + t * f.alpha * yi;
        reduce_heisenberg(nx, ny, nz);
        out.c[3 * i] = nx;
        out.c[3 * i + 1] = ny;
        out.c[3 * i + 2] = nz;
      }
      break;
    }
    case SpaceKind::modular: {
      const int d = space.modular().d;
      for (int i = 0; i < d; ++i) {
        const auto k = static_cast<std::size_t>(4 * i);
        const double t = v[static_cast<std::size_t>(i)];
        const Mat2 g{x.c[k] + t * x.c[k + 2], x.c[k + 1] + t * x.c[k + 3], x.c[k + 2], x.c[k + 3]};
        const Mat2 r = reduce_lattice(g);
        std::copy(r.begin(), r.end(), out.c.begin() + static_cast<std::ptrdiff_t>(k));
      }
      break;
    }
  }
}

Point translate(const Space& space, const Point& x, std::span<const double> v) {
  Point out;
  translate_into(space, x, v, out);
  return out;
}

Mat3 heisenberg_flow_matrix(double alpha, double beta, double gamma, double t) {
  return {1.0, t * alpha, t * gamma + 0.5 * t * t * alpha * beta,
          0.0, 1.0, t * beta,
          0.0, 0.0, 1.0};
}

std::array<double, 3> heisenberg_mul(const std::array<double, 3>& g, const std::array<double, 3>& h) {
  return {g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]};
}

std::array<double, 3> heisenberg_inv(const std::array<double, 3>& g) {
  return {-g[0], -g[1], -g[2] + g[0] * g[1]};
}

std::array<double, 3> heisenberg_flow(const HeisenbergFactor& f, double t) {
  return {t * f.alpha, t * f.beta, t * f.gamma + 0.5 * t * t * f.alpha * f.beta};
}

Point horizontal_proj(const Space& space, const Point& x) {
  const auto& h = space.heisenberg();
  check_shape(space, x);
  Point out{SpaceKind::torus, {}};
  out.c.reserve(2 * h.factors.size());
  for (std::size_t i = 0; i < h.factors.size(); ++i) {
    out.c.push_back(x.c[3 * i]);
    out.c.push_back(x.c[3 * i + 1]);
  }
  return out;
}

Point haar_sample(const Space& space, std::uint64_t seed) {
  Point out{space.kind(), std::vector<double>(static_cast<std::size_t>(space.coord_count()))};
  std::uint64_t k = 0;
  if (space.kind() != SpaceKind::modular) {
    for (double& t : out.c) t = counter_uniform(seed, k++);
    return out;
  }
  const double y_min = std::sqrt(3.0) / 2.0;
  for (int i = 0; i < space.modular().d; ++i) {
    double x = 0.0, y = 0.0;
    do {
      y = y_min / (1.0 - counter_uniform(seed, k++));
      x = counter_uniform(seed, k++) - 0.5;
    } while (x * x + y * y < 1.0);
    const double theta = kTwoPi * counter_uniform(seed, k++);
    // h = n_x a_y k_theta maps i to x + iy; the lattice is g Z^2 with g = h^{-1}.
    const double cs = std::cos(theta), sn = std::sin(theta);
    const double sy = std::sqrt(y);
    // a_y^{-1} n_{-x} = [[1/sy, -x/sy], [0, sy]]
    const double p = 1.0 / sy, q = -x / sy, s = sy;
    // k_{-theta} = [[cs, sn], [-sn, cs]]
    const Mat2 g{cs * p, cs * q + sn * s, -sn * p, -sn * q + cs * s};
    const Mat2 r = reduce_lattice(g);
    std::copy(r.begin(), r.end(), out.c.begin() + 4 * i);
  }
  return out;
}

namespace {

Mat2 inverse2(const Mat2& g) { return {g[3], -g[1], -g[2], g[0]}; }  // det 1

Mat2 mul2(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

double distance(const Space& space, const Point& x, const Point& y) {
  check_shape(space, x);
  check_shape(space, y);
  double s = 0.0;
  if (space.kind() != SpaceKind::modular) {
    for (std::size_t i = 0; i < x.c.size(); ++i) {
      const double t = circle_dist(x.c[i], y.c[i]);
      s += t * t;
    }
    return std::sqrt(s);
  }
  for (int i = 0; i < space.modular().d; ++i) {
    const Mat2 gx = modular_factor(x, i);
    const Mat2 gy = modular_factor(y, i);
    // Align the bases: gy gamma with gamma the integer matrix nearest gy^{-1} gx.
    Mat2 gamma = mul2(inverse2(gy), gx);
    for (double& e : gamma) e = std::nearbyint(e);
    Mat2 aligned = gy;
    if (det2(gamma) == 1.0) aligned = mul2(gy, gamma);
    for (int k = 0; k < 4; ++k) {
      const double t = gx[static_cast<std::size_t>(k)] - aligned[static_cast<std::size_t>(k)];
      s += t * t;
    }
  }
  return std::sqrt(s);
}

bool same_point(const Space& space, const Point& x, const Point& y, double tol) {
  check_shape(space, x);
  check_shape(space, y);
  switch (space.kind()) {
    case SpaceKind::torus:
      for (std::size_t i = 0; i < x.c.size(); ++i) {
        if (circle_dist(x.c[i], y.c[i]) > tol) return false;
      }
      return true;
    case SpaceKind::heisenberg:
      for (std::size_t k = 0; k < x.c.size(); k += 3) {
        const auto h = heisenberg_mul(heisenberg_inv({x.c[k], x.c[k + 1], x.c[k + 2]}),
                                      {y.c[k], y.c[k + 1], y.c[k + 2]});
        for (double t : h) {
          if (std::abs(t - std::nearbyint(t)) > tol) return false;
        }
      }
      return true;
    case SpaceKind::modular:
      for (int i = 0; i < space.modular().d; ++i) {
        const Mat2 m = mul2(inverse2(modular_factor(x, i)), modular_factor(y, i));
        for (double t : m) {
          if (std::abs(t - std::nearbyint(t)) > tol * (1.0 + std::abs(t))) return false;
        }
      }
      return true;
  }
  return false;
}

nlohmann::json point_to_json(const Point& x) {
  return {{"space", std::string(to_string(x.kind))}, {"coords", x.c}};
}

Point point_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("coords")) {
    throw InputError("point record needs 'space' and 'coords'");
  }
  const auto name = j.at("space").get<std::string>();
  Point p;
  if (name == "torus") p.kind = SpaceKind::torus;
  else if (name == "heisenberg") p.kind = SpaceKind::heisenberg;
  else if (name == "modular") p.kind = SpaceKind::modular;
  else throw InputError("unknown space '" + name + "' in point record");
  p.c = j.at("coords").get<std::vector<double>>();
  return p;
}

}  // namespace speq
