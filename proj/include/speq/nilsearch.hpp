#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "speq/observables.hpp"
#include "speq/spaces.hpp"

namespace speq {

/// Nonzero z in Z^p with |z|_inf <= height_bound, lexicographic. CapacityError if
/// more than `cap` vectors would be produced.
std::vector<std::vector<int>> enumerate_characters(int p, double height_bound, std::size_t cap = 1000000);

/// <z, D psi(direction)>: the linear frequency of t -> <z, psi(u_{t dir} x)>, where
/// D psi(e_i) = (alpha_i, beta_i) in factor i's horizontal block.
double orbit_frequency(const Space& space, std::span<const int> z, std::span<const double> direction);

struct ObstructionReport {
  bool found = false;
  std::optional<std::vector<int>> character;
  double tau = 0.0;           // max_i |orbit_frequency(z, e_i)| of the hit
  double search_bound = 0.0;  // delta^{-C1}
  double threshold = 0.0;     // delta^{-C2} / R
  double delta = 0.0;
  double C1 = 2.0;
  double C2 = 2.0;
  double R = 1.0;
  std::size_t scanned = 0;
};

/// Scans |z|_inf = 1, 2, ..., floor(delta^{-C1}); within a shell, lexicographic
/// over representatives whose first nonzero entry is positive. Returns the first
/// z with tau(z) <= delta^{-C2} / R. Needs 0 < delta < 1/2.
ObstructionReport obstruction_search(const Space& space, double delta, double C1, double C2, double R,
                                     std::size_t cap = 100000000);

/// delta = R^{-beta / (C1 p + C2)}.
double default_nil_delta(double R, double beta, double C1, double C2, int p);

struct ExceptionalMeasure {
  double measure = 0.0;  // fraction of unit directions u with |<w, u>| <= tau
  double ratio = 0.0;    // measure / (tau / |w|)
  std::size_t samples = 0;
};

/// Grid estimate over S^{d-1}, d <= 3, for a frequency vector w in R^d.
ExceptionalMeasure exceptional_directions(std::span<const double> w, double tau, int angular_resolution);

/// Same with w = D psi^T z on a Heisenberg product; the ratio is against tau / |z|.
ExceptionalMeasure exceptional_directions(const Space& space, std::span<const int> z, double tau,
                                          int angular_resolution);

/// The differenced observable x -> f(u_h x) conj(f(x)) for a nilcharacter f.
/// Abelian characters give the constant e(<z, horizontal shift of u_h>). A central
/// character with frequencies m gives e(sum_i m_i z(u_{h_i})) e(sum_i m_i h_i alpha_i y_i):
/// exact on lifts (covering-group coordinates), and on reduced points whenever no
/// factor's y coordinate wraps (h_i beta_i = 0).
Observable vdc_difference(const Space& space, const Observable& f, std::span<const double> h);

/// f(u_h g) conj(f(g)) for a central character evaluated on the lift g in H(R)^d
/// without reduction, from the group law alone.
cplx vdc_lifted(const Space& space, const Observable& f, const Point& x, std::span<const double> h);

nlohmann::json to_json(const ObstructionReport& r);

}  // namespace speq
