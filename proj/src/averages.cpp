#include "speq/averages.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "speq/error.hpp"
#include "speq/kernels.hpp"
#include "speq/parallel.hpp"
#include "speq/quadrature.hpp"

namespace speq {

std::string_view to_string(QuadratureKind kind) {
  switch (kind) {
    case QuadratureKind::grid: return "grid";
    case QuadratureKind::low_discrepancy: return "low_discrepancy";
    case QuadratureKind::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

QuadratureKind quadrature_kind_from_string(std::string_view name) {
  if (name == "grid") return QuadratureKind::grid;
  if (name == "low_discrepancy") return QuadratureKind::low_discrepancy;
  if (name == "monte_carlo") return QuadratureKind::monte_carlo;
  throw ParameterError("unknown quadrature kind '" + std::string(name) + "'");
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::ball: return "ball";
    case Family::sphere: return "sphere";
    case Family::annulus: return "annulus";
    case Family::bochner_riesz: return "bochner_riesz";
    case Family::tangent_patch: return "tangent_patch";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "ball") return Family::ball;
  if (name == "sphere") return Family::sphere;
  if (name == "annulus") return Family::annulus;
  if (name == "bochner_riesz" || name == "br") return Family::bochner_riesz;
  if (name == "tangent_patch") return Family::tangent_patch;
  throw ParameterError("unknown average family '" + std::string(name) + "'");
}

QuadratureScheme QuadratureScheme::coarse() const {
  QuadratureScheme c = *this;
  c.density = 0.75 * density;
  c.min_nodes = std::max(1, (3 * min_nodes) / 4);
  return c;
}

namespace {

// Points v = offset + r * sum_k u_k basis_k for u on the unit sphere of R^m.
struct Frame {
  int d = 1;
  int m = 1;
  std::vector<double> offset;
  std::vector<double> basis;  // m rows of length d
};

Frame full_frame(int d) {
  Frame f{d, d, std::vector<double>(static_cast<std::size_t>(d), 0.0),
          std::vector<double>(static_cast<std::size_t>(d * d), 0.0)};
  for (int i = 0; i < d; ++i) f.basis[static_cast<std::size_t>(i * d + i)] = 1.0;
  return f;
}

struct Shell {
  double r;
  double w;
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::size_t circle_nodes(double r, double bandwidth, const QuadratureScheme& s) {
  return static_cast<std::size_t>(std::ceil(0.4 * s.density * bandwidth * kTwoPi * r)) +
         static_cast<std::size_t>(s.min_nodes);
}

// Direction rules on S^{m-1} with weights summing to 1.
class DirectionRule {
public:
  DirectionRule(int m, std::size_t per_circle, QuadratureKind kind, std::uint64_t seed)
      : m_(m), kind_(kind), seed_(seed) {
    if (m_ == 1) {
      size_ = 2;
    } else if (m_ == 2) {
      size_ = per_circle;
    } else if (m_ == 3) {
      nphi_ = std::max<std::size_t>(per_circle, 4);
      if (kind_ == QuadratureKind::grid) {
        polar_ = quad::composite_legendre(0.0, kPi, quad::panels_for(2.0 * static_cast<double>(nphi_)));
        size_ = polar_.size() * nphi_;
      } else {
        size_ = nphi_ * (nphi_ / 2 + 1);
      }
    } else {
      const double n = std::pow(static_cast<double>(per_circle), m_ - 1);
      size_ = static_cast<std::size_t>(std::min(n, 65536.0));
      primes_ = quad::first_primes(2 * ((m_ + 1) / 2));
    }
    if (kind_ == QuadratureKind::low_discrepancy) {
      for (int j = 0; j < std::max(m_, 2); ++j) shift_.push_back(counter_uniform(seed_, static_cast<std::uint64_t>(j)));
    }
  }

  std::size_t size() const { return size_; }

  // Writes the i-th direction into u (length m) and returns its weight.
  double node(std::size_t i, double* u) const {
    const double n = static_cast<double>(size_);
    switch (m_) {
      case 1:
        u[0] = (i == 0) ? 1.0 : -1.0;
        return 0.5;
      case 2: {
        double t = 0.0;
        if (kind_ == QuadratureKind::grid) t = static_cast<double>(i) / n;
        else if (kind_ == QuadratureKind::low_discrepancy) t = frac(shift_[0] + static_cast<double>(i) * 0.6180339887498949);
        else t = counter_uniform(seed_, i);
        u[0] = std::cos(kTwoPi * t);
        u[1] = std::sin(kTwoPi * t);
        return 1.0 / n;
      }
      case 3: {
        double ct = 0.0, phi = 0.0, w = 1.0 / n;
        if (kind_ == QuadratureKind::grid) {
          // Gauss-Legendre in theta (not cos theta) keeps the integrand smooth at the poles.
          const auto& nd = polar_[i / nphi_];
          ct = std::cos(nd.x);
          phi = kTwoPi * static_cast<double>(i % nphi_) / static_cast<double>(nphi_);
          w = 0.5 * std::sin(nd.x) * nd.w / static_cast<double>(nphi_);
        } else {
          const double a = uniform(i, 0), b = uniform(i, 1);
          ct = 2.0 * a - 1.0;
          phi = kTwoPi * b;
        }
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        u[0] = st * std::cos(phi);
        u[1] = st * std::sin(phi);
        u[2] = ct;
        return w;
      }
      default: {
        double norm = 0.0;
        for (int j = 0; j < m_; j += 2) {
          const double a = std::max(uniform(i, j), 1e-300), b = uniform(i, j + 1);
          const double rad = std::sqrt(-2.0 * std::log(a));
          u[j] = rad * std::cos(kTwoPi * b);
          if (j + 1 < m_) u[j + 1] = rad * std::sin(kTwoPi * b);
        }
        for (int j = 0; j < m_; ++j) norm += u[j] * u[j];
        norm = std::sqrt(norm);
        for (int j = 0; j < m_; ++j) u[j] /= norm;
        return 1.0 / n;
      }
    }
  }

private:
  double uniform(std::size_t i, int j) const {
    if (kind_ == QuadratureKind::monte_carlo) {
      return counter_uniform(seed_, i * 64 + static_cast<std::size_t>(j));
    }
    const int base = primes_.empty() ? (j == 0 ? 2 : 3) : primes_[static_cast<std::size_t>(j)];
    double h = quad::halton(i + 1, base);
    if (kind_ == QuadratureKind::low_discrepancy && static_cast<std::size_t>(j) < shift_.size()) {
      h = frac(h + shift_[static_cast<std::size_t>(j)]);
    }
    return h;
  }

  int m_;
  QuadratureKind kind_;
  std::uint64_t seed_;
  std::size_t size_ = 0;
  std::size_t nphi_ = 0;
  std::vector<quad::Node> polar_;
  std::vector<int> primes_;
  std::vector<double> shift_;
};

struct Integrand {
  const Space& space;
  const Observable& f;
  const Point& x;
  std::vector<double> twist;  // empty: no twist

  cplx operator()(std::span<const double> v, Point& scratch) const {
    translate_into(space, x, v, scratch);
    cplx value = eval(space, f, scratch);
    if (!twist.empty()) value *= expi2pi(dot(v, twist));
    return value;
  }
};

// Radii on [0, L] for the weight r^{m-1} rho(r); composite Gauss-Legendre, or a
// Gauss-Jacobi end panel when rho ~ (L - r)^alpha with alpha != 0.
std::vector<Shell> radial_shells(double L, int m, double bandwidth, const QuadratureScheme& s,
                                 const std::function<double(double)>& rho, double singular_alpha,
                                 std::uint64_t stream) {
  const double count = std::ceil(1.5 * s.density * bandwidth * L) + s.min_nodes;
  std::vector<Shell> shells;
  if (s.kind == QuadratureKind::monte_carlo) {
    const auto n = static_cast<std::size_t>(count);
    const auto seed = stream_seed(s.seed, stream);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = L * counter_uniform(seed, i);
      shells.push_back({r, std::pow(r, m - 1) * rho(r) * L / static_cast<double>(n)});
    }
    return shells;
  }
  const int panels = quad::panels_for(count);
  if (singular_alpha != 0.0) {
    for (const auto& nd : quad::composite_right_singular(0.0, L, panels, singular_alpha)) {
      // rho(r) / (L - r)^alpha is smooth; the rule already carries (L - r)^alpha.
      shells.push_back({nd.x, nd.w * std::pow(nd.x, m - 1) * rho(nd.x) / std::pow(L - nd.x, singular_alpha)});
    }
  } else {
    for (const auto& nd : quad::composite_legendre(0.0, L, panels)) {
      shells.push_back({nd.x, nd.w * std::pow(nd.x, m - 1) * rho(nd.x)});
    }
  }
  return shells;
}

struct Job {
  std::size_t shell;
  std::size_t begin;
  std::size_t end;
};

// sum_k w_k avg_{u} g(offset + r_k E u) / sum_k w_k.
cplx integrate(const Frame& frame, const std::vector<Shell>& shells, double bandwidth, const Integrand& g,
               const QuadratureScheme& s, std::uint64_t stream, double& nodes) {
  if (frame.m == 0) {
    Point scratch;
    nodes += 1.0;
    return g(frame.offset, scratch);
  }
  std::vector<DirectionRule> rules;
  rules.reserve(shells.size());
  double total = 0.0;
  for (std::size_t k = 0; k < shells.size(); ++k) {
    rules.emplace_back(frame.m, circle_nodes(shells[k].r, bandwidth, s), s.kind, stream_seed(s.seed, stream * 1000003 + k));
    total += static_cast<double>(rules.back().size());
  }
  if (total > s.max_nodes) {
    throw CapacityError("quadrature needs " + std::to_string(total) + " nodes, above the cap of " +
                        std::to_string(s.max_nodes));
  }
  nodes += total;
  constexpr std::size_t chunk = 16384;
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < shells.size(); ++k) {
    for (std::size_t b = 0; b < rules[k].size(); b += chunk) jobs.push_back({k, b, std::min(b + chunk, rules[k].size())});
  }
  struct Partial {
    cplx sum;
    double w;
  };
  const auto partial = parallel_map<Partial>(jobs.size(), s.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const Shell& sh = shells[job.shell];
    Point scratch;
    std::vector<double> u(static_cast<std::size_t>(frame.m)), v(static_cast<std::size_t>(frame.d));
    cplx sum{0.0, 0.0};
    double wsum = 0.0;
    for (std::size_t i = job.begin; i < job.end; ++i) {
      const double w = rules[job.shell].node(i, u.data());
      wsum += w;
      for (int c = 0; c < frame.d; ++c) {
        double t = frame.offset[static_cast<std::size_t>(c)];
        for (int k = 0; k < frame.m; ++k) t += sh.r * u[static_cast<std::size_t>(k)] * frame.basis[static_cast<std::size_t>(k * frame.d + c)];
        v[static_cast<std::size_t>(c)] = t;
      }
      sum += w * g(v, scratch);
    }
    return Partial{sum, wsum};
  });
  // Direction sums are normalized per shell so that f = 1 averages to 1 exactly.
  std::vector<Partial> per_shell(shells.size(), Partial{{0.0, 0.0}, 0.0});
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    per_shell[jobs[j].shell].sum += partial[j].sum;
    per_shell[jobs[j].shell].w += partial[j].w;
  }
  cplx sum{0.0, 0.0};
  double wsum = 0.0;
  for (std::size_t k = 0; k < shells.size(); ++k) {
    if (per_shell[k].w == 0.0) continue;
    sum += shells[k].w * (per_shell[k].sum / per_shell[k].w);
    wsum += shells[k].w;
  }
  return sum / wsum;
}

void check_radius(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ParameterError("average radius R must be positive and finite");
}

// Runs fn at the scheme and, if requested, at its coarsening.
AverageResult with_error(const QuadratureScheme& s, const std::function<cplx(const QuadratureScheme&, double&)>& fn) {
  AverageResult out;
  out.value = fn(s, out.nodes);
  if (s.estimate_error) {
    const cplx coarse = fn(s.coarse(), out.nodes);
    out.error = std::abs(out.value - coarse);
  }
  return out;
}

double bandwidth_of(const Space& space, const Observable& f, double R) {
  return orbit_bandwidth(space, f, R);
}

const auto one = [](double) { return 1.0; };

}  // namespace

void validate(const AverageSpec& spec, int d) {
  check_radius(spec.R);
  if (!(spec.scheme.density > 0.0) || spec.scheme.min_nodes < 1) {
    throw ParameterError("quadrature density must be positive and min_nodes at least 1");
  }
  if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) throw ParameterError("delta must be >= 0");
  switch (spec.family) {
    case Family::annulus:
      if (!(spec.omega > 0.0 && spec.omega <= 1.0)) throw ParameterError("omega must lie in (0, 1]");
      break;
    case Family::bochner_riesz:
      if (!(spec.alpha > -1.0)) throw SingularOrder("Bochner-Riesz order alpha must exceed -1");
      break;
    case Family::tangent_patch: {
      if (!(spec.beta > 0.0 && spec.beta < 1.0)) throw ParameterError("beta must lie in (0, 1)");
      if (static_cast<int>(spec.direction.size()) != d) throw DimensionError("patch direction must have d entries");
      const double n = norm2(spec.direction);
      if (std::abs(n - 1.0) > 1e-9) throw ParameterError("patch direction must be a unit vector");
      break;
    }
    default:
      break;
  }
}

AverageResult ball_average(const Space& space, const Observable& f, const Point& x, double R,
                           const QuadratureScheme& scheme) {
  check_radius(R);
  check_compatible(space, f);
  const int d = space.action_dim();
  const Integrand g{space, f, x, {}};
  const double B = bandwidth_of(space, f, R);
  const Frame frame = full_frame(d);
  return with_error(scheme, [&](const QuadratureScheme& s, double& nodes) {
    return integrate(frame, radial_shells(R, d, B, s, one, 0.0, 1), B, g, s, 1, nodes);
  });
}

AverageResult sphere_average(const Space& space, const Observable& f, const Point& x, double R,
                             const QuadratureScheme& scheme) {
  check_radius(R);
  check_compatible(space, f);
  const int d = space.action_dim();
  const Integrand g{space, f, x, {}};
  const double B = bandwidth_of(space, f, R);
  const Frame frame = full_frame(d);
  AverageResult out = with_error(scheme, [&](const QuadratureScheme& s, double& nodes) {
    return integrate(frame, {{R, 1.0}}, B, g, s, 2, nodes);
  });
  out.degenerate = (d == 1);
  return out;
}

AverageResult annulus_average(const Space& space, const Observable& f, const Point& x, double R, double omega,
                              const QuadratureScheme& scheme) {
  check_radius(R);
  if (!(omega > 0.0 && omega <= 1.0)) throw ParameterError("omega must lie in (0, 1]");
  check_compatible(space, f);
  const int d = space.action_dim();
  const Integrand g{space, f, x, {}};
  const double W = std::pow(R, omega);
  const double B = bandwidth_of(space, f, 0.5 * R + W);
  const Frame frame = full_frame(d);
  AverageResult out = with_error(scheme, [&](const QuadratureScheme& s, double& nodes) {
    // t-average of unit-mass spheres of radius R/2 + t, t in [0, W].
    const double count = std::ceil(1.5 * s.density * B * W) + s.min_nodes;
    std::vector<Shell> shells;
    if (s.kind == QuadratureKind::monte_carlo) {
      const auto n = static_cast<std::size_t>(count);
      for (std::size_t i = 0; i < n; ++i) {
        shells.push_back({0.5 * R + W * counter_uniform(stream_seed(s.seed, 3), i), 1.0});
      }
    } else {
      for (const auto& nd : quad::composite_legendre(0.0, W, quad::panels_for(count))) {
        shells.push_back({0.5 * R + nd.x, nd.w});
      }
    }
    return integrate(frame, shells, B, g, s, 3, nodes);
  });
  out.degenerate = (d == 1);
  return out;
}

AverageResult br_average(const Space& space, const Observable& f, const Point& x, double R, double alpha,
                         const QuadratureScheme& scheme) {
  check_radius(R);
  if (!(alpha > -1.0)) throw SingularOrder("Bochner-Riesz order alpha must exceed -1");
  check_compatible(space, f);
  const int d = space.action_dim();
  const Integrand g{space, f, x, {}};
  const double B = bandwidth_of(space, f, R);
  const Frame frame = full_frame(d);
  const auto rho = [&](double r) {
    const double s = r / R;
    const double t = 1.0 - s * s;
    return t <= 0.0 ? 0.0 : std::pow(t, alpha);
  };
  return with_error(scheme, [&](const QuadratureScheme& s, double& nodes) {
    return integrate(frame, radial_shells(R, d, B, s, rho, alpha, 4), B, g, s, 4, nodes);
  });
}

namespace {

// Orthonormal basis of the complement of the unit vector n (Gram-Schmidt).
std::vector<double> complement_basis(std::span<const double> n) {
  const int d = static_cast<int>(n.size());
  std::vector<std::vector<double>> rows;
  for (int e = 0; e < d && static_cast<int>(rows.size()) < d - 1; ++e) {
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    v[static_cast<std::size_t>(e)] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      double p = dot(v, n);
      for (int c = 0; c < d; ++c) v[static_cast<std::size_t>(c)] -= p * n[static_cast<std::size_t>(c)];
      for (const auto& r : rows) {
        p = dot(v, r);
        for (int c = 0; c < d; ++c) v[static_cast<std::size_t>(c)] -= p * r[static_cast<std::size_t>(c)];
      }
    }
    const double len = norm2(v);
    if (len < 1e-6) continue;
    for (double& t : v) t /= len;
    rows.push_back(std::move(v));
  }
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return flat;
}

}  // namespace

AverageResult tangent_patch_average(const Space& space, const Observable& f, const Point& x, double R,
                                    double beta, std::span<const double> direction,
                                    const QuadratureScheme& scheme) {
  AverageSpec spec;
  spec.family = Family::tangent_patch;
  spec.R = R;
  spec.beta = beta;
  spec.direction.assign(direction.begin(), direction.end());
  const int d = space.action_dim();
  validate(spec, d);
  check_compatible(space, f);
  const Integrand g{space, f, x, {}};
  const double rho = std::pow(R, beta);
  const double B = bandwidth_of(space, f, R + rho);
  Frame frame{d, d - 1, {}, complement_basis(direction)};
  for (double t : direction) frame.offset.push_back(R * t);
  return with_error(scheme, [&](const QuadratureScheme& s, double& nodes) {
    if (frame.m == 0) return integrate(frame, {}, B, g, s, 5, nodes);
    return integrate(frame, radial_shells(rho, frame.m, B, s, one, 0.0, 5), B, g, s, 5, nodes);
  });
}

AverageResult patch_combination_average(const Space& space, const Observable& f, const Point& x, double R,
                                        double beta, std::size_t directions, const QuadratureScheme& scheme) {
  check_radius(R);
  const int d = space.action_dim();
  if (directions < 1) throw ParameterError("need at least one direction");
  const DirectionRule rule(d, directions, d >= 4 ? QuadratureKind::low_discrepancy : QuadratureKind::grid, scheme.seed);
  QuadratureScheme inner = scheme;
  AverageResult out;
  std::vector<double> u(static_cast<std::size_t>(d));
  double wsum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double w = rule.node(i, u.data());
    const AverageResult p = tangent_patch_average(space, f, x, R, beta, u, inner);
    out.value += w * p.value;
    out.error += w * p.error;
    out.nodes += p.nodes;
    wsum += w;
  }
  out.value /= wsum;
  out.error /= wsum;
  return out;
}

AverageResult base_average(const Space& space, const Observable& f, const Point& x, const AverageSpec& spec) {
  validate(spec, space.action_dim());
  switch (spec.family) {
    case Family::ball: return ball_average(space, f, x, spec.R, spec.scheme);
    case Family::sphere: return sphere_average(space, f, x, spec.R, spec.scheme);
    case Family::annulus: return annulus_average(space, f, x, spec.R, spec.omega, spec.scheme);
    case Family::bochner_riesz: return br_average(space, f, x, spec.R, spec.alpha, spec.scheme);
    case Family::tangent_patch:
      return tangent_patch_average(space, f, x, spec.R, spec.beta, spec.direction, spec.scheme);
  }
  return {};
}

AverageResult mollified_average(const Space& space, const Observable& f, const Point& x, const AverageSpec& spec,
                                double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("mollification needs delta > 0");
  validate(spec, space.action_dim());
  check_compatible(space, f);
  const int d = space.action_dim();
  const double B = bandwidth_of(space, f, spec.R);
  const auto run = [&](const QuadratureScheme& s, double& nodes) {
    // Outer rule for phi_delta(w) dw: radial profile times directions, small node
    // counts since the inner average varies on the scale of 1/B >> delta.
    QuadratureScheme outer = s;
    outer.kind = QuadratureKind::grid;
    outer.min_nodes = std::max(8, s.min_nodes / 3);
    const int panels = 2 + quad::panels_for(s.density * B * delta);
    std::vector<Shell> shells;
    for (const auto& nd : quad::composite_legendre(0.0, delta, panels)) {
      shells.push_back({nd.x, nd.w * std::pow(nd.x, d - 1) * kernels::mollifier_profile(nd.x / delta)});
    }
    AverageSpec in = spec;
    in.delta = 0.0;
    in.scheme = s;
    in.scheme.estimate_error = false;
    cplx sum{0.0, 0.0};
    double wsum = 0.0;
    std::vector<double> u(static_cast<std::size_t>(d)), w(static_cast<std::size_t>(d));
    for (const auto& sh : shells) {
      if (sh.w == 0.0) continue;
      const DirectionRule rule(d, circle_nodes(sh.r, B, outer), QuadratureKind::grid, s.seed);
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double wd = rule.node(i, u.data());
        for (int c = 0; c < d; ++c) w[static_cast<std::size_t>(c)] = sh.r * u[static_cast<std::size_t>(c)];
        const AverageResult a = base_average(space, f, translate(space, x, w), in);
        nodes += a.nodes;
        sum += sh.w * wd * a.value;
        wsum += sh.w * wd;
      }
    }
    return sum / wsum;
  };
  return with_error(spec.scheme, run);
}

AverageResult average(const Space& space, const Observable& f, const Point& x, const AverageSpec& spec) {
  if (spec.delta > 0.0) return mollified_average(space, f, x, spec, spec.delta);
  return base_average(space, f, x, spec);
}

AverageResult twisted_ball_average(const Space& space, const Observable& f, const Point& x, double R,
                                   std::span<const double> z, const QuadratureScheme& scheme) {
  check_radius(R);
  check_compatible(space, f);
  const int d = space.action_dim();
  if (static_cast<int>(z.size()) != d) throw DimensionError("twist frequency must have d entries");
  for (double t : z) {
    if (!std::isfinite(t)) throw ParameterError("twist frequency must be finite");
  }
  const Integrand g{space, f, x, std::vector<double>(z.begin(), z.end())};
  const double B = bandwidth_of(space, f, R) + norm2(z);
  const Frame frame = full_frame(d);
  return with_error(scheme, [&](const QuadratureScheme& s, double& nodes) {
    return integrate(frame, radial_shells(R, d, B, s, one, 0.0, 6), B, g, s, 6, nodes);
  });
}

AverageResult model_fourier_coefficient(const Space& space, const Observable& f, const Point& x, double R,
                                        std::span<const int> n, const QuadratureScheme& scheme) {
  check_radius(R);
  const int d = space.action_dim();
  if (static_cast<int>(n.size()) != d) throw DimensionError("frequency must have d entries");
  std::vector<double> z;
  for (int k : n) z.push_back(-static_cast<double>(k) / (2.0 * R));
  AverageResult a = twisted_ball_average(space, f, x, R, z, scheme);
  const double ratio = unit_ball_volume(d) / std::pow(2.0, d);  // vol(B_R) / (2R)^d
  a.value *= ratio;
  a.error *= ratio;
  return a;
}

}  // namespace speq
