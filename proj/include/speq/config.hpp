#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "speq/averages.hpp"
#include "speq/observables.hpp"
#include "speq/spaces.hpp"

namespace speq {

/// A real parameter written as a number or as "p/q", "sqrt(n)", "k*sqrt(n)"
/// (optionally negated). The text is kept so configs round-trip unchanged.
struct Param {
  double value = 0.0;
  std::string expr;  // empty for plain numbers

  static Param number(double v) { return {v, {}}; }
};

Param parse_param(const nlohmann::json& j);
nlohmann::json to_json(const Param& p);

/// True when the expression is provably rational (integers, "p/q", integral numbers).
bool is_rational(const Param& p);

struct SpaceConfig {
  SpaceKind kind = SpaceKind::torus;
  int n = 2;                              // torus dimension
  std::vector<std::vector<Param>> action; // torus: n rows of d entries
  struct Factor {
    Param alpha, beta, gamma;
  };
  std::vector<Factor> factors;  // heisenberg
  int d = 1;                    // modular factor count
};

struct PointConfig {
  std::optional<std::vector<double>> coords;
  std::optional<std::uint64_t> seed;  // Haar sample; defaults to the global seed
};

struct ObservableConfig {
  std::string type = "character";  // constant, character, trig, abelian, central, bump
  cplx value{1.0, 0.0};            // constant
  std::vector<int> freq;           // character n, abelian z, central m
  struct Term {
    std::vector<int> n;
    cplx coeff;
  };
  std::vector<Term> terms;  // trig
  double c = 1.0, w = 0.2;  // bump
  std::vector<int> factors;
  bool centered = true;
  std::uint64_t samples = 200000;
  std::optional<std::uint64_t> seed;
};

struct AverageConfig {
  std::string family = "ball";  // an average Family, or twisted_ball, model_coefficient
  double omega = 1.0;
  double alpha = 0.0;
  double beta = 0.5;
  double delta = 0.0;
  std::vector<double> direction;  // tangent_patch
  std::vector<double> z;          // twisted_ball
  std::vector<int> n;             // model_coefficient
};

struct GridConfig {
  std::vector<double> R;  // explicit list, or empty with a geometric range
  double R_min = 1.0;
  double R_max = 1.0;
  int count = 0;

  std::vector<double> radii() const;
};

struct SweepConfig {
  std::string parameter;  // alpha, omega, beta or delta
  std::vector<double> values;
};

struct PredictionConfig {
  std::optional<double> gamma_prime;  // empty: use the fitted exponent
};

struct NilsearchConfig {
  double delta = 0.2;
  double C1 = 2.0;
  double C2 = 2.0;
  double R = 1000.0;
};

struct ExperimentConfig {
  std::string id = "experiment";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool record_timing = false;
  SpaceConfig space;
  PointConfig base_point;
  ObservableConfig observable;
  AverageConfig average;
  GridConfig grid;
  QuadratureScheme quadrature;
  std::optional<SweepConfig> sweep;
  std::optional<PredictionConfig> prediction;
  std::optional<NilsearchConfig> nilsearch;
};

/// Parses and validates; every problem raises ConfigError before any computation.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig config_from_text(std::string_view text);
nlohmann::json config_to_json(const ExperimentConfig& c);

Space build_space(const SpaceConfig& c);
Observable build_observable(const ExperimentConfig& c, const Space& space);
Point build_point(const ExperimentConfig& c, const Space& space);

/// Warnings about the space, e.g. Heisenberg factors whose 1, alpha, beta are
/// rationally dependent (not minimal).
std::vector<std::string> space_warnings(const SpaceConfig& c);

/// Embedded preset configs.
std::optional<std::string_view> preset_text(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace speq
