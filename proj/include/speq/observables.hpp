#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "speq/numeric.hpp"
#include "speq/spaces.hpp"

namespace speq {

struct Constant {
  cplx value{1.0, 0.0};
};

/// sum_j c_j e(<n_j, x>) on T^n.
struct TrigPolynomial {
  int n = 2;
  std::vector<std::vector<int>> freqs;
  std::vector<cplx> coeffs;
};

/// Characters of a Heisenberg product. Abelian: e(<z, (x_1, y_1, ..., x_d, y_d)>),
/// z in Z^{2d}. Central: e(sum_i m_i z_i) on fundamental-domain coordinates.
struct NilCharacter {
  enum class Type { abelian, central };
  Type type = Type::abelian;
  std::vector<int> z;
  std::vector<int> m;
};

/// constant * e(<k, (x_1, y_1, ..., x_d, y_d)>) on a Heisenberg product, k real.
/// Produced by differencing nilcharacters.
struct LinearPhase {
  cplx constant{1.0, 0.0};
  std::vector<double> k;
};

/// prod_{i in factors} (b(lambda_1(g_i)) - mu), with b a C^infinity bump of
/// height 1 on [c - w, c + w] and mu its Haar mean when centered (else 0).
struct BumpObservable {
  double c = 1.0;
  double w = 0.2;
  std::vector<int> factors;
  bool centered = false;
  double factor_mean = 0.0;    // Monte Carlo estimate of E[b(lambda_1)]
  double factor_stderr = 0.0;
  std::size_t samples = 0;
};

struct Observable;

struct LinearCombination {
  std::vector<std::pair<cplx, std::shared_ptr<const Observable>>> terms;
};

struct Observable {
  std::variant<Constant, TrigPolynomial, NilCharacter, LinearPhase, BumpObservable, LinearCombination> body;
  int sobolev_order = 2;  // metadata only
  std::optional<double> assumed_rate;
};

struct Regularity {
  double lipschitz_constant = 0.0;
  int sobolev_order = 2;
  bool mean_zero = false;
  std::optional<double> assumed_rate;
};

struct MeanEstimate {
  cplx value;
  double error = 0.0;  // standard error, zero for exact means
};

/// e_n on T^n.
Observable character(std::vector<int> n);
Observable abelian_character(std::vector<int> z);
Observable central_character(std::vector<int> m);
Observable combine(const std::vector<std::pair<cplx, Observable>>& terms);

/// Builds a bump observable, estimating the single-factor mean by Monte Carlo.
Observable make_bump(const Space& space, double c, double w, std::vector<int> factors, bool centered,
                     std::size_t samples = 1000000, std::uint64_t seed = 0x5eed);

/// The bump profile exp(1 - 1/(1 - u^2)), u = (s - c)/w, and sup |d/ds|.
double bump_profile(double c, double w, double s);
double bump_derivative_sup(double w);

/// Throws TypeMismatch / DimensionError unless f is defined on the space.
void check_compatible(const Space& space, const Observable& f);

cplx eval(const Space& space, const Observable& f, const Point& x);

MeanEstimate mean(const Space& space, const Observable& f);

/// Global Lipschitz constant for the flat metric of `distance`. For bump
/// observables the lattice-map constant is valid for pairs closer than 0.1 (c + w).
double lipschitz_bound(const Space& space, const Observable& f);

double sup_norm(const Space& space, const Observable& f);

Regularity regularity(const Space& space, const Observable& f);

/// Oscillation scale (cycles per unit flow time) of v -> f(u_v x) on |v| <= R,
/// used to size quadrature rules.
double orbit_bandwidth(const Space& space, const Observable& f, double R);

}  // namespace speq
