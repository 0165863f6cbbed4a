#include "speq/nilsearch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "speq/error.hpp"

namespace speq {

namespace {

std::size_t box_count(int p, long long bound) {
  double n = 1.0;
  for (int i = 0; i < p; ++i) n *= static_cast<double>(2 * bound + 1);
  return n > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(n) - 1;
}

// Odometer over [-k, k]^p in lexicographic order; false when exhausted.
bool next_lex(std::vector<int>& z, int k) {
  for (std::size_t i = z.size(); i-- > 0;) {
    if (z[i] < k) {
      ++z[i];
      return true;
    }
    z[i] = -k;
  }
  return false;
}

const HeisenbergProductSpace& heisenberg_of(const Space& space) { return space.heisenberg(); }

double factor_frequency(const HeisenbergFactor& f, std::span<const int> z, std::size_t i) {
  return z[2 * i] * f.alpha + z[2 * i + 1] * f.beta;
}

}  // namespace

std::vector<std::vector<int>> enumerate_characters(int p, double height_bound, std::size_t cap) {
  if (p < 1) throw DimensionError("character dimension p must be positive");
  if (!(height_bound >= 1.0) || !std::isfinite(height_bound)) throw ParameterError("height bound must be >= 1");
  const auto k = static_cast<long long>(std::floor(height_bound));
  const std::size_t count = box_count(p, k);
  if (count > cap) {
    throw CapacityError("enumeration of " + std::to_string(count) + " characters exceeds the cap of " +
                        std::to_string(cap));
  }
  std::vector<std::vector<int>> out;
  out.reserve(count);
  std::vector<int> z(static_cast<std::size_t>(p), -static_cast<int>(k));
  do {
    if (std::any_of(z.begin(), z.end(), [](int c) { return c != 0; })) out.push_back(z);
  } while (next_lex(z, static_cast<int>(k)));
  return out;
}

double orbit_frequency(const Space& space, std::span<const int> z, std::span<const double> direction) {
  const auto& h = heisenberg_of(space);
  const std::size_t d = h.factors.size();
  if (z.size() != 2 * d) throw DimensionError("horizontal character needs 2d entries");
  if (direction.size() != d) throw DimensionError("direction needs d entries");
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += direction[i] * factor_frequency(h.factors[i], z, i);
  return s;
}

ObstructionReport obstruction_search(const Space& space, double delta, double C1, double C2, double R,
                                     std::size_t cap) {
  const auto& h = heisenberg_of(space);
  if (!(delta > 0.0 && delta < 0.5)) throw ParameterError("obstruction search needs 0 < delta < 1/2");
  if (!(C1 > 0.0) || !(C2 > 0.0)) throw ParameterError("C1 and C2 must be positive");
  if (!(R > 0.0) || !std::isfinite(R)) throw ParameterError("R must be positive");
  const int p = static_cast<int>(2 * h.factors.size());
  ObstructionReport rep;
  rep.delta = delta;
  rep.C1 = C1;
  rep.C2 = C2;
  rep.R = R;
  rep.search_bound = std::pow(delta, -C1);
  rep.threshold = std::pow(delta, -C2) / R;
  const auto bound = static_cast<long long>(std::floor(rep.search_bound));
  const std::size_t count = box_count(p, bound);
  if (count > cap) {
    throw CapacityError("obstruction search over " + std::to_string(count) + " characters exceeds the cap of " +
                        std::to_string(cap));
  }
  for (int k = 1; k <= bound; ++k) {
    std::vector<int> z(static_cast<std::size_t>(p), -k);
    do {
      int height = 0, first = 0;
      for (int c : z) {
        height = std::max(height, std::abs(c));
        if (first == 0) first = c;
      }
      if (height != k || first <= 0) continue;
      ++rep.scanned;
      double tau = 0.0;
      for (std::size_t i = 0; i < h.factors.size(); ++i) {
        tau = std::max(tau, std::abs(factor_frequency(h.factors[i], z, i)));
      }
      if (tau <= rep.threshold) {
        rep.found = true;
        rep.character = z;
        rep.tau = tau;
        return rep;
      }
    } while (next_lex(z, k));
  }
  return rep;
}

double default_nil_delta(double R, double beta, double C1, double C2, int p) {
  if (!(R > 1.0)) throw ParameterError("R must exceed 1");
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta must lie in (0, 1)");
  return std::pow(R, -beta / (C1 * p + C2));
}

ExceptionalMeasure exceptional_directions(std::span<const double> w, double tau, int angular_resolution) {
  const int d = static_cast<int>(w.size());
  if (d < 1 || d > 3) throw Unsupported("exceptional_directions supports d <= 3");
  if (!(tau > 0.0)) throw ParameterError("tau must be positive");
  if (angular_resolution < 4) throw ParameterError("angular resolution must be at least 4");
  double wn = 0.0;
  for (double t : w) wn += t * t;
  wn = std::sqrt(wn);
  if (wn == 0.0) throw ParameterError("frequency vector must be nonzero");
  ExceptionalMeasure out;
  std::size_t hits = 0;
  const int n = angular_resolution;
  if (d == 1) {
    out.samples = 2;
    hits = std::abs(w[0]) <= tau ? 2 : 0;
  } else if (d == 2) {
    for (int j = 0; j < n; ++j) {
      const double th = kTwoPi * (j + 0.5) / n;
      if (std::abs(w[0] * std::cos(th) + w[1] * std::sin(th)) <= tau) ++hits;
    }
    out.samples = static_cast<std::size_t>(n);
  } else {
    // Cells equally spaced in cos(theta) and phi have equal area.
    for (int i = 0; i < n; ++i) {
      const double c = -1.0 + 2.0 * (i + 0.5) / n;
      const double s = std::sqrt(1.0 - c * c);
      for (int j = 0; j < 2 * n; ++j) {
        const double ph = kPi * (j + 0.5) / n;
        if (std::abs(w[0] * s * std::cos(ph) + w[1] * s * std::sin(ph) + w[2] * c) <= tau) ++hits;
      }
    }
    out.samples = static_cast<std::size_t>(2 * n * n);
  }
  out.measure = static_cast<double>(hits) / static_cast<double>(out.samples);
  out.ratio = out.measure / (tau / wn);
  return out;
}

ExceptionalMeasure exceptional_directions(const Space& space, std::span<const int> z, double tau,
                                          int angular_resolution) {
  const auto& h = heisenberg_of(space);
  const std::size_t d = h.factors.size();
  if (z.size() != 2 * d) throw DimensionError("horizontal character needs 2d entries");
  std::vector<double> w(d);
  double zn = 0.0;
  for (std::size_t i = 0; i < d; ++i) w[i] = factor_frequency(h.factors[i], z, i);
  for (int c : z) zn += static_cast<double>(c) * c;
  zn = std::sqrt(zn);
  if (zn == 0.0) throw ParameterError("character must be nonzero");
  double wn = 0.0;
  for (double t : w) wn += t * t;
  if (wn == 0.0) {
    // Zero frequency: every direction is exceptional.
    return {1.0, zn / tau, 1};
  }
  ExceptionalMeasure m = exceptional_directions(w, tau, angular_resolution);
  m.ratio = m.measure / (tau / zn);
  return m;
}

namespace {

const NilCharacter& nil_body(const Observable& f) {
  const auto* c = std::get_if<NilCharacter>(&f.body);
  if (c == nullptr) throw TypeMismatch("van der Corput differencing needs a nilcharacter");
  return *c;
}

void check_shift(const HeisenbergProductSpace& h, std::span<const double> shift) {
  if (shift.size() != h.factors.size()) throw DimensionError("shift needs d entries");
  for (double t : shift) {
    if (!std::isfinite(t)) throw InputError("shift must be finite");
  }
}

}  // namespace

Observable vdc_difference(const Space& space, const Observable& f, std::span<const double> h) {
  const auto& hs = heisenberg_of(space);
  const NilCharacter& c = nil_body(f);
  check_compatible(space, f);
  check_shift(hs, h);
  const std::size_t d = hs.factors.size();
  LinearPhase out;
  out.k.assign(2 * d, 0.0);
  double phase = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const auto u = heisenberg_flow(hs.factors[i], h[i]);
    if (c.type == NilCharacter::Type::abelian) {
      phase += c.z[2 * i] * u[0] + c.z[2 * i + 1] * u[1];
    } else {
      // z(u g) = z_u + z_g + x_u y_g.
      phase += c.m[i] * u[2];
      out.k[2 * i + 1] = c.m[i] * u[0];
    }
  }
  out.constant = expi2pi(phase);
  return Observable{out, f.sobolev_order, f.assumed_rate};
}

cplx vdc_lifted(const Space& space, const Observable& f, const Point& x, std::span<const double> h) {
  const auto& hs = heisenberg_of(space);
  const NilCharacter& c = nil_body(f);
  check_shift(hs, h);
  if (c.type != NilCharacter::Type::central) throw TypeMismatch("vdc_lifted needs a central character");
  double phase = 0.0;
  for (std::size_t i = 0; i < hs.factors.size(); ++i) {
    const std::array<double, 3> g{x.c[3 * i], x.c[3 * i + 1], x.c[3 * i + 2]};
    const auto moved = heisenberg_mul(heisenberg_flow(hs.factors[i], h[i]), g);
    phase += c.m[i] * (moved[2] - g[2]);
  }
  return expi2pi(phase);
}

nlohmann::json to_json(const ObstructionReport& r) {
  nlohmann::json j;
  j["found"] = r.found;
  j["character"] = r.character ? nlohmann::json(*r.character) : nlohmann::json(nullptr);
  j["tau"] = r.tau;
  j["search_bound"] = r.search_bound;
  j["threshold"] = r.threshold;
  j["delta"] = r.delta;
  j["C1"] = r.C1;
  j["C2"] = r.C2;
  j["R"] = r.R;
  j["scanned"] = r.scanned;
  return j;
}

}  // namespace speq
