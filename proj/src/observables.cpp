#include "speq/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "speq/error.hpp"

namespace speq {

namespace {

template <class T>
Observable wrap(T body) {
  Observable o;
  o.body = std::move(body);
  return o;
}

}  // namespace

Observable character(std::vector<int> n) {
  TrigPolynomial p;
  p.n = static_cast<int>(n.size());
  p.freqs.push_back(std::move(n));
  p.coeffs.push_back({1.0, 0.0});
  return wrap(std::move(p));
}

Observable abelian_character(std::vector<int> z) {
  return wrap(NilCharacter{NilCharacter::Type::abelian, std::move(z), {}});
}

Observable central_character(std::vector<int> m) {
  if (std::all_of(m.begin(), m.end(), [](int t) { return t == 0; })) {
    throw ParameterError("central character needs a nonzero frequency");
  }
  return wrap(NilCharacter{NilCharacter::Type::central, {}, std::move(m)});
}

Observable combine(const std::vector<std::pair<cplx, Observable>>& terms) {
  LinearCombination lc;
  for (const auto& [a, f] : terms) lc.terms.emplace_back(a, std::make_shared<const Observable>(f));
  return wrap(std::move(lc));
}

double bump_profile(double c, double w, double s) {
  const double u = (s - c) / w;
  const double t = 1.0 - u * u;
  if (t <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / t);
}

double bump_derivative_sup(double w) {
  // |d/du exp(1 - 1/(1-u^2))| = exp(1 - 1/(1-u^2)) 2|u| / (1-u^2)^2, maximized on a
  // fine grid and refined by golden section.
  const auto g = [](double u) {
    const double t = 1.0 - u * u;
    return t <= 0.0 ? 0.0 : std::exp(1.0 - 1.0 / t) * 2.0 * u / (t * t);
  };
  double best = 0.0, arg = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double u = i / 1000.0;
    if (g(u) > best) {
      best = g(u);
      arg = u;
    }
  }
  double lo = std::max(0.0, arg - 1e-3), hi = std::min(1.0, arg + 1e-3);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < 60; ++i) {
    const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    if (g(a) > g(b)) hi = b;
    else lo = a;
  }
  return std::max(best, g(0.5 * (lo + hi))) / w;
}

Observable make_bump(const Space& space, double c, double w, std::vector<int> factors, bool centered,
                     std::size_t samples, std::uint64_t seed) {
  const int d = space.modular().d;
  if (!(c > 0.0) || !(w > 0.0) || !std::isfinite(c) || !std::isfinite(w)) {
    throw ParameterError("bump needs c > 0 and w > 0");
  }
  if (factors.empty()) throw ParameterError("bump needs at least one factor");
  for (int i : factors) {
    if (i < 0 || i >= d) throw DimensionError("bump factor index " + std::to_string(i) + " out of range");
  }
  if (samples < 2) throw ParameterError("bump mean needs at least two samples");
  BumpObservable b{c, w, std::move(factors), centered, 0.0, 0.0, samples};
  const Space single{ModularProductSpace{1}};
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = bump_profile(c, w, shortest_vector(haar_sample(single, splitmix64(seed) + i), 0));
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(samples);
  b.factor_mean = sum / n;
  b.factor_stderr = std::sqrt(std::max(0.0, sum2 / n - b.factor_mean * b.factor_mean) / (n - 1.0));
  return wrap(std::move(b));
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw TypeMismatch(what);
}

double bump_lattice_constant(double c, double w) {
  // Lipschitz constant of lambda_1 near a reduced basis with |b1| <= lam:
  // |b2| <= 2/(sqrt(3) lam), so |g|_F^2 <= lam^2 + 4/(3 lam^2) and the coefficient
  // vector of the shortest vector is bounded by |g| lam.
  const double lam = std::min(1.1 * (c + w), std::sqrt(2.0 / std::sqrt(3.0)));
  return std::sqrt(std::pow(lam, 4) + 4.0 / 3.0);
}

double factor_sup(const BumpObservable& b) {
  return b.centered ? std::max(1.0 - b.factor_mean, b.factor_mean) : 1.0;
}

}  // namespace

void check_compatible(const Space& space, const Observable& f) {
  std::visit(overloaded{
                 [](const Constant&) {},
                 [&](const TrigPolynomial& p) {
                   require(space.kind() == SpaceKind::torus, "trigonometric polynomials live on a torus");
                   if (p.n != space.torus().n) throw DimensionError("trigonometric polynomial dimension mismatch");
                   if (p.freqs.size() != p.coeffs.size()) throw ParameterError("frequency/coefficient count mismatch");
                   for (const auto& n : p.freqs) {
                     if (static_cast<int>(n.size()) != p.n) throw DimensionError("frequency length mismatch");
                   }
                 },
                 [&](const NilCharacter& c) {
                   require(space.kind() == SpaceKind::heisenberg, "nilcharacters live on a Heisenberg product");
                   const std::size_t d = space.heisenberg().factors.size();
                   if (c.type == NilCharacter::Type::abelian) {
                     if (c.z.size() != 2 * d) throw DimensionError("abelian character needs 2d frequencies");
                   } else if (c.m.size() != d) {
                     throw DimensionError("central character needs d frequencies");
                   }
                 },
                 [&](const LinearPhase& l) {
                   require(space.kind() == SpaceKind::heisenberg, "linear phases live on a Heisenberg product");
                   if (l.k.size() != 2 * space.heisenberg().factors.size()) {
                     throw DimensionError("linear phase needs 2d frequencies");
                   }
                 },
                 [&](const BumpObservable& b) {
                   require(space.kind() == SpaceKind::modular, "bump observables live on a modular product");
                   for (int i : b.factors) {
                     if (i < 0 || i >= space.modular().d) throw DimensionError("bump factor out of range");
                   }
                 },
                 [&](const LinearCombination& l) {
                   for (const auto& t : l.terms) check_compatible(space, *t.second);
                 },
             },
             f.body);
}

cplx eval(const Space& space, const Observable& f, const Point& x) {
  require(x.kind == space.kind(), "point does not belong to the space");
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [&](const TrigPolynomial& p) {
            require(space.kind() == SpaceKind::torus, "trigonometric polynomials live on a torus");
            cplx s{0.0, 0.0};
            for (std::size_t j = 0; j < p.freqs.size(); ++j) {
              double phase = 0.0;
              for (std::size_t i = 0; i < p.freqs[j].size(); ++i) phase += p.freqs[j][i] * x.c[i];
              s += p.coeffs[j] * expi2pi(phase);
            }
            return s;
          },
          [&](const NilCharacter& c) {
            require(space.kind() == SpaceKind::heisenberg, "nilcharacters live on a Heisenberg product");
            double phase = 0.0;
            if (c.type == NilCharacter::Type::abelian) {
              for (std::size_t i = 0; 2 * i < c.z.size(); ++i) {
                phase += c.z[2 * i] * x.c[3 * i] + c.z[2 * i + 1] * x.c[3 * i + 1];
              }
            } else {
              for (std::size_t i = 0; i < c.m.size(); ++i) phase += c.m[i] * x.c[3 * i + 2];
            }
            return expi2pi(phase);
          },
          [&](const LinearPhase& l) {
            require(space.kind() == SpaceKind::heisenberg, "linear phases live on a Heisenberg product");
            double phase = 0.0;
            for (std::size_t i = 0; 2 * i < l.k.size(); ++i) {
              phase += l.k[2 * i] * x.c[3 * i] + l.k[2 * i + 1] * x.c[3 * i + 1];
            }
            return l.constant * expi2pi(phase);
          },
          [&](const BumpObservable& b) {
            require(space.kind() == SpaceKind::modular, "bump observables live on a modular product");
            const double mu = b.centered ? b.factor_mean : 0.0;
            double v = 1.0;
            for (int i : b.factors) v *= bump_profile(b.c, b.w, shortest_vector(x, i)) - mu;
            return cplx{v, 0.0};
          },
          [&](const LinearCombination& l) {
            cplx s{0.0, 0.0};
            for (const auto& [a, g] : l.terms) s += a * eval(space, *g, x);
            return s;
          },
      },
      f.body);
}

MeanEstimate mean(const Space& space, const Observable& f) {
  check_compatible(space, f);
  return std::visit(
      overloaded{
          [](const Constant& c) { return MeanEstimate{c.value, 0.0}; },
          [](const TrigPolynomial& p) {
            cplx s{0.0, 0.0};
            for (std::size_t j = 0; j < p.freqs.size(); ++j) {
              if (std::all_of(p.freqs[j].begin(), p.freqs[j].end(), [](int t) { return t == 0; })) s += p.coeffs[j];
            }
            return MeanEstimate{s, 0.0};
          },
          [](const NilCharacter& c) {
            const auto& v = c.type == NilCharacter::Type::abelian ? c.z : c.m;
            const bool trivial = std::all_of(v.begin(), v.end(), [](int t) { return t == 0; });
            return MeanEstimate{trivial ? cplx{1.0, 0.0} : cplx{0.0, 0.0}, 0.0};
          },
          [](const LinearPhase& l) {
            // Coordinates are uniform on [0,1): E e(k t) = (e(k) - 1) / (2 pi i k).
            cplx s = l.constant;
            for (double k : l.k) {
              if (k == 0.0) continue;
              if (k == std::nearbyint(k)) return MeanEstimate{{0.0, 0.0}, 0.0};
              s *= (expi2pi(k) - 1.0) / cplx{0.0, kTwoPi * k};
            }
            return MeanEstimate{s, 0.0};
          },
          [](const BumpObservable& b) {
            const double k = static_cast<double>(b.factors.size());
            if (b.centered) {
              // Exact mean is 0; the centering constant carries the Monte Carlo error.
              return MeanEstimate{{0.0, 0.0}, std::pow(b.factor_stderr, k)};
            }
            return MeanEstimate{{std::pow(b.factor_mean, k), 0.0},
                                k * std::pow(b.factor_mean, k - 1.0) * b.factor_stderr};
          },
          [&](const LinearCombination& l) {
            MeanEstimate m{{0.0, 0.0}, 0.0};
            for (const auto& [a, g] : l.terms) {
              const auto e = mean(space, *g);
              m.value += a * e.value;
              m.error += std::abs(a) * e.error;
            }
            return m;
          },
      },
      f.body);
}

namespace {

double int_norm(const std::vector<int>& v) {
  double s = 0.0;
  for (int t : v) s += double(t) * t;
  return std::sqrt(s);
}

}  // namespace

double lipschitz_bound(const Space& space, const Observable& f) {
  check_compatible(space, f);
  return std::visit(
      overloaded{
          [](const Constant&) { return 0.0; },
          [](const TrigPolynomial& p) {
            double s = 0.0;
            for (std::size_t j = 0; j < p.freqs.size(); ++j) s += std::abs(p.coeffs[j]) * kTwoPi * int_norm(p.freqs[j]);
            return s;
          },
          [](const NilCharacter& c) {
            return kTwoPi * int_norm(c.type == NilCharacter::Type::abelian ? c.z : c.m);
          },
          [](const LinearPhase& l) {
            double s = 0.0;
            for (double k : l.k) s += k * k;
            return std::abs(l.constant) * kTwoPi * std::sqrt(s);
          },
          [](const BumpObservable& b) {
            const double each = bump_derivative_sup(b.w) * bump_lattice_constant(b.c, b.w);
            const double m = factor_sup(b);
            const double k = static_cast<double>(b.factors.size());
            return k * each * std::pow(m, k - 1.0);
          },
          [&](const LinearCombination& l) {
            double s = 0.0;
            for (const auto& [a, g] : l.terms) s += std::abs(a) * lipschitz_bound(space, *g);
            return s;
          },
      },
      f.body);
}

double sup_norm(const Space& space, const Observable& f) {
  check_compatible(space, f);
  return std::visit(overloaded{
                        [](const Constant& c) { return std::abs(c.value); },
                        [](const TrigPolynomial& p) {
                          double s = 0.0;
                          for (const auto& c : p.coeffs) s += std::abs(c);
                          return s;
                        },
                        [](const NilCharacter&) { return 1.0; },
                        [](const LinearPhase& l) { return std::abs(l.constant); },
                        [](const BumpObservable& b) {
                          return std::pow(factor_sup(b), static_cast<double>(b.factors.size()));
                        },
                        [&](const LinearCombination& l) {
                          double s = 0.0;
                          for (const auto& [a, g] : l.terms) s += std::abs(a) * sup_norm(space, *g);
                          return s;
                        },
                    },
                    f.body);
}

Regularity regularity(const Space& space, const Observable& f) {
  const auto m = mean(space, f);
  bool mean_zero = m.value == cplx{0.0, 0.0};
  return Regularity{lipschitz_bound(space, f), f.sobolev_order, mean_zero, f.assumed_rate};
}

double orbit_bandwidth(const Space& space, const Observable& f, double R) {
  check_compatible(space, f);
  return std::visit(
      overloaded{
          [](const Constant&) { return 0.0; },
          [&](const TrigPolynomial& p) {
            const auto& t = space.torus();
            double best = 0.0;
            for (const auto& n : p.freqs) {
              double s = 0.0;
              for (int j = 0; j < t.d; ++j) {
                double c = 0.0;
                for (int i = 0; i < t.n; ++i) c += n[static_cast<std::size_t>(i)] * t.a(i, j);
                s += c * c;
              }
              best = std::max(best, std::sqrt(s));
            }
            return best;
          },
          [&](const NilCharacter& c) {
            const auto& fs = space.heisenberg().factors;
            double s = 0.0;
            for (std::size_t i = 0; i < fs.size(); ++i) {
              double rate = 0.0;
              if (c.type == NilCharacter::Type::abelian) {
                rate = c.z[2 * i] * fs[i].alpha + c.z[2 * i + 1] * fs[i].beta;
              } else {
                rate = c.m[i] * (std::abs(fs[i].gamma) + std::abs(fs[i].alpha) * (1.0 + R * std::abs(fs[i].beta)));
              }
              s += rate * rate;
            }
            return std::sqrt(s);
          },
          [&](const LinearPhase& l) {
            const auto& fs = space.heisenberg().factors;
            double s = 0.0;
            for (std::size_t i = 0; i < fs.size(); ++i) {
              const double rate = l.k[2 * i] * fs[i].alpha + l.k[2 * i + 1] * fs[i].beta;
              s += rate * rate;
            }
            return std::sqrt(s);
          },
          [](const BumpObservable& b) {
            // d/dt lambda_1(n_t g) is bounded by the second coordinate of the short
            // vector, hence by lambda_1 itself on the support.
            const double lam = std::min(b.c + b.w, std::sqrt(2.0 / std::sqrt(3.0)));
            return bump_derivative_sup(b.w) * lam / kTwoPi;
          },
          [&](const LinearCombination& l) {
            double best = 0.0;
            for (const auto& t : l.terms) best = std::max(best, orbit_bandwidth(space, *t.second, R));
            return best;
          },
      },
      f.body);
}

}  // namespace speq
