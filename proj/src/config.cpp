#include "speq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <regex>
#include <set>
#include <utility>

#include "speq/error.hpp"

namespace speq {

namespace {

using nlohmann::json;

struct PresetEntry {
  const char* name;
  const char* text;
};

const PresetEntry kPresets[] = {
#include "preset_data.inc"
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
      fail(where, "unknown key '" + it.key() + "'");
    }
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing key '") + key + "'");
  return j.at(key);
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(where + "." + key, "wrong type");
  }
}

double num_or(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return get_number(j.at(key), where + "." + key);
}

std::vector<int> int_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) fail(where, "expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<double> num_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(get_number(e, where));
  return out;
}

long long squarefree_part(long long n) {
  long long s = 1;
  for (long long p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e % 2 == 1) s *= p;
  }
  return s * n;
}

struct SqrtForm {
  bool ok = false;
  long long radicand = 1;
};

SqrtForm sqrt_form(const std::string& expr) {
  static const std::regex re(R"(^\s*-?\s*(?:(\d+(?:\.\d+)?)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)\s*$)");
  std::smatch m;
  if (!std::regex_match(expr, m, re)) return {};
  return {true, std::stoll(m[2].str())};
}

}  // namespace

Param parse_param(const json& j) {
  if (j.is_number()) return Param::number(get_number(j, "parameter"));
  if (!j.is_string()) throw ConfigError("parameter: expected a number or an expression string");
  const std::string s = j.get<std::string>();
  static const std::regex frac(R"(^\s*(-?\d+)\s*/\s*(\d+)\s*$)");
  static const std::regex root(R"(^\s*(-)?\s*(?:(\d+(?:\.\d+)?)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, frac)) {
    const double q = std::stod(m[2].str());
    if (q == 0.0) throw ConfigError("parameter '" + s + "': zero denominator");
    return {std::stod(m[1].str()) / q, s};
  }
  if (std::regex_match(s, m, root)) {
    const double k = m[2].matched ? std::stod(m[2].str()) : 1.0;
    const double sign = m[1].matched ? -1.0 : 1.0;
    return {sign * k * std::sqrt(std::stod(m[3].str())), s};
  }
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v)) {
    throw ConfigError("parameter '" + s + "': expected a number, p/q, sqrt(n) or k*sqrt(n)");
  }
  return {v, s};
}

json to_json(const Param& p) {
  if (p.expr.empty()) return p.value;
  return p.expr;
}

bool is_rational(const Param& p) {
  if (p.expr.empty()) return p.value == std::floor(p.value);
  const SqrtForm f = sqrt_form(p.expr);
  if (f.ok) return f.radicand == 0 || squarefree_part(f.radicand) == 1;
  static const std::regex frac(R"(^\s*(-?\d+)\s*/\s*(\d+)\s*$)");
  if (std::regex_match(p.expr, frac)) return true;
  return p.value == std::floor(p.value);
}

std::vector<double> GridConfig::radii() const {
  if (!R.empty()) return R;
  if (count < 1) return {};
  if (count == 1) return {R_min};
  std::vector<double> out;
  const double step = std::log(R_max / R_min) / (count - 1);
  for (int i = 0; i < count; ++i) out.push_back(R_min * std::exp(step * i));
  out.back() = R_max;
  return out;
}

namespace {

SpaceConfig parse_space(const json& j) {
  const std::string w = "space";
  const std::string kind = get_or<std::string>(require(j, "kind", w).is_string() ? j : json::object(), "kind", "", w);
  SpaceConfig c;
  if (kind == "torus") {
    check_keys(j, {"kind", "n", "action"}, w);
    c.kind = SpaceKind::torus;
    c.n = get_or<int>(j, "n", 2, w);
    if (c.n < 1) fail(w + ".n", "must be positive");
    if (j.contains("action")) {
      const json& a = j.at("action");
      if (!a.is_array() || static_cast<int>(a.size()) != c.n) fail(w + ".action", "expected n rows");
      for (const auto& row : a) {
        if (!row.is_array() || row.empty()) fail(w + ".action", "expected rows of numbers");
        std::vector<Param> r;
        for (const auto& e : row) r.push_back(parse_param(e));
        if (!c.action.empty() && r.size() != c.action.front().size()) fail(w + ".action", "ragged rows");
        c.action.push_back(std::move(r));
      }
    }
  } else if (kind == "heisenberg") {
    check_keys(j, {"kind", "factors"}, w);
    c.kind = SpaceKind::heisenberg;
    const json& f = require(j, "factors", w);
    if (!f.is_array() || f.empty()) fail(w + ".factors", "expected a nonempty array");
    for (const auto& e : f) {
      check_keys(e, {"alpha", "beta", "gamma"}, w + ".factors[]");
      SpaceConfig::Factor fac;
      fac.alpha = parse_param(require(e, "alpha", w + ".factors[]"));
      fac.beta = parse_param(require(e, "beta", w + ".factors[]"));
      fac.gamma = e.contains("gamma") ? parse_param(e.at("gamma")) : Param::number(0.0);
      c.factors.push_back(fac);
    }
  } else if (kind == "modular") {
    check_keys(j, {"kind", "d"}, w);
    c.kind = SpaceKind::modular;
    c.d = get_or<int>(j, "d", 1, w);
    if (c.d < 1) fail(w + ".d", "must be positive");
  } else {
    fail(w + ".kind", "expected torus, heisenberg or modular");
  }
  return c;
}

json space_to_json(const SpaceConfig& c) {
  json j;
  switch (c.kind) {
    case SpaceKind::torus: {
      j["kind"] = "torus";
      j["n"] = c.n;
      if (!c.action.empty()) {
        json rows = json::array();
        for (const auto& r : c.action) {
          json row = json::array();
          for (const auto& p : r) row.push_back(to_json(p));
          rows.push_back(row);
        }
        j["action"] = rows;
      }
      break;
    }
    case SpaceKind::heisenberg: {
      j["kind"] = "heisenberg";
      json f = json::array();
      for (const auto& fac : c.factors) {
        f.push_back({{"alpha", to_json(fac.alpha)}, {"beta", to_json(fac.beta)}, {"gamma", to_json(fac.gamma)}});
      }
      j["factors"] = f;
      break;
    }
    case SpaceKind::modular:
      j["kind"] = "modular";
      j["d"] = c.d;
      break;
  }
  return j;
}

json cplx_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

ObservableConfig parse_observable(const json& j) {
  const std::string w = "observable";
  if (!j.is_object()) fail(w, "expected an object");
  ObservableConfig o;
  o.type = get_or<std::string>(j, "type", "", w);
  if (o.type == "constant") {
    check_keys(j, {"type", "re", "im"}, w);
    o.value = {num_or(j, "re", 1.0, w), num_or(j, "im", 0.0, w)};
  } else if (o.type == "character") {
    check_keys(j, {"type", "n"}, w);
    o.freq = int_list(require(j, "n", w), w + ".n");
  } else if (o.type == "abelian") {
    check_keys(j, {"type", "z"}, w);
    o.freq = int_list(require(j, "z", w), w + ".z");
  } else if (o.type == "central") {
    check_keys(j, {"type", "m"}, w);
    o.freq = int_list(require(j, "m", w), w + ".m");
  } else if (o.type == "trig") {
    check_keys(j, {"type", "terms"}, w);
    const json& t = require(j, "terms", w);
    if (!t.is_array() || t.empty()) fail(w + ".terms", "expected a nonempty array");
    for (const auto& e : t) {
      check_keys(e, {"n", "re", "im"}, w + ".terms[]");
      o.terms.push_back({int_list(require(e, "n", w + ".terms[]"), w + ".terms[].n"),
                         {num_or(e, "re", 0.0, w), num_or(e, "im", 0.0, w)}});
    }
  } else if (o.type == "bump") {
    check_keys(j, {"type", "c", "w", "factors", "centered", "samples", "seed"}, w);
    o.c = num_or(j, "c", 1.0, w);
    o.w = num_or(j, "w", 0.2, w);
    o.factors = int_list(require(j, "factors", w), w + ".factors");
    o.centered = get_or<bool>(j, "centered", true, w);
    o.samples = get_or<std::uint64_t>(j, "samples", 200000, w);
    if (j.contains("seed")) o.seed = get_or<std::uint64_t>(j, "seed", 0, w);
  } else {
    fail(w + ".type", "expected constant, character, trig, abelian, central or bump");
  }
  return o;
}

json observable_to_json(const ObservableConfig& o) {
  json j;
  j["type"] = o.type;
  if (o.type == "constant") {
    j["re"] = o.value.real();
    j["im"] = o.value.imag();
  } else if (o.type == "character") {
    j["n"] = o.freq;
  } else if (o.type == "abelian") {
    j["z"] = o.freq;
  } else if (o.type == "central") {
    j["m"] = o.freq;
  } else if (o.type == "trig") {
    json t = json::array();
    for (const auto& term : o.terms) {
      json e = cplx_json(term.coeff);
      e["n"] = term.n;
      t.push_back(e);
    }
    j["terms"] = t;
  } else if (o.type == "bump") {
    j["c"] = o.c;
    j["w"] = o.w;
    j["factors"] = o.factors;
    j["centered"] = o.centered;
    j["samples"] = o.samples;
    if (o.seed) j["seed"] = *o.seed;
  }
  return j;
}

const std::set<std::string>& extra_families() {
  static const std::set<std::string> s{"twisted_ball", "model_coefficient"};
  return s;
}

AverageConfig parse_average(const json& j) {
  const std::string w = "average";
  check_keys(j, {"family", "omega", "alpha", "beta", "delta", "direction", "z", "n"}, w);
  AverageConfig a;
  a.family = get_or<std::string>(j, "family", "ball", w);
  if (a.family == "br") a.family = "bochner_riesz";
  if (!extra_families().count(a.family)) {
    try {
      family_from_string(a.family);
    } catch (const Error&) {
      fail(w + ".family", "unknown family '" + a.family + "'");
    }
  }
  a.omega = num_or(j, "omega", 1.0, w);
  a.alpha = num_or(j, "alpha", 0.0, w);
  a.beta = num_or(j, "beta", 0.5, w);
  a.delta = num_or(j, "delta", 0.0, w);
  if (j.contains("direction")) a.direction = num_list(j.at("direction"), w + ".direction");
  if (j.contains("z")) a.z = num_list(j.at("z"), w + ".z");
  if (j.contains("n")) a.n = int_list(j.at("n"), w + ".n");
  return a;
}

json average_to_json(const AverageConfig& a) {
  json j{{"family", a.family}, {"omega", a.omega}, {"alpha", a.alpha}, {"beta", a.beta}, {"delta", a.delta}};
  if (!a.direction.empty()) j["direction"] = a.direction;
  if (!a.z.empty()) j["z"] = a.z;
  if (!a.n.empty()) j["n"] = a.n;
  return j;
}

GridConfig parse_grid(const json& j) {
  const std::string w = "grid";
  check_keys(j, {"R", "R_min", "R_max", "count"}, w);
  GridConfig g;
  if (j.contains("R")) {
    if (j.contains("R_min") || j.contains("R_max") || j.contains("count")) {
      fail(w, "give either an R list or R_min/R_max/count");
    }
    g.R = num_list(j.at("R"), w + ".R");
    if (g.R.empty()) fail(w + ".R", "empty R-grid");
  } else {
    g.R_min = get_number(require(j, "R_min", w), w + ".R_min");
    g.R_max = get_number(require(j, "R_max", w), w + ".R_max");
    g.count = get_or<int>(j, "count", 0, w);
    if (g.count < 1) fail(w + ".count", "empty R-grid");
    if (!(g.R_min > 0.0) || !(g.R_max >= g.R_min)) fail(w, "need 0 < R_min <= R_max");
    if (g.count > 1 && !(g.R_max > g.R_min)) fail(w, "need R_min < R_max for more than one point");
  }
  const auto r = g.radii();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) fail(w, "radii must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) fail(w, "radii must be strictly increasing");
  }
  return g;
}

json grid_to_json(const GridConfig& g) {
  if (!g.R.empty()) return {{"R", g.R}};
  return {{"R_min", g.R_min}, {"R_max", g.R_max}, {"count", g.count}};
}

QuadratureScheme parse_quadrature(const json& j) {
  const std::string w = "quadrature";
  check_keys(j, {"kind", "density", "min_nodes", "max_nodes"}, w);
  QuadratureScheme q;
  try {
    q.kind = quadrature_kind_from_string(get_or<std::string>(j, "kind", "grid", w));
  } catch (const Error& e) {
    fail(w + ".kind", e.what());
  }
  q.density = num_or(j, "density", q.density, w);
  q.min_nodes = get_or<int>(j, "min_nodes", q.min_nodes, w);
  q.max_nodes = num_or(j, "max_nodes", q.max_nodes, w);
  if (!(q.density > 0.0)) fail(w + ".density", "must be positive");
  if (q.min_nodes < 1) fail(w + ".min_nodes", "must be at least 1");
  if (!(q.max_nodes >= 1.0)) fail(w + ".max_nodes", "must be at least 1");
  return q;
}

json quadrature_to_json(const QuadratureScheme& q) {
  return {{"kind", std::string(to_string(q.kind))},
          {"density", q.density},
          {"min_nodes", q.min_nodes},
          {"max_nodes", q.max_nodes}};
}

AverageSpec spec_for(const ExperimentConfig& c, double R) {
  AverageSpec s;
  s.family = family_from_string(c.average.family);
  s.R = R;
  s.omega = c.average.omega;
  s.alpha = c.average.alpha;
  s.beta = c.average.beta;
  s.delta = c.average.delta;
  s.direction = c.average.direction;
  s.scheme = c.quadrature;
  return s;
}

void validate_average(const ExperimentConfig& c, int d) {
  const std::string w = "average";
  const auto& a = c.average;
  if (!(a.delta >= 0.0)) fail(w + ".delta", "must be >= 0");
  if (a.family == "twisted_ball") {
    if (static_cast<int>(a.z.size()) != d) fail(w + ".z", "twist frequency needs d entries");
    return;
  }
  if (a.family == "model_coefficient") {
    if (static_cast<int>(a.n.size()) != d) fail(w + ".n", "frequency needs d entries");
    return;
  }
  if (a.family == "sphere" && d == 1) fail(w + ".family", "sphere averages need d >= 2");
  try {
    validate(spec_for(c, 1.0), d);
  } catch (const Error& e) {
    fail(w, e.what());
  }
}

void validate_config(ExperimentConfig& c) {
  if (c.threads < 1) fail("threads", "must be at least 1");
  Space space;
  try {
    space = build_space(c.space);
  } catch (const Error& e) {
    fail("space", e.what());
  }
  const int d = space.action_dim();
  try {
    const Observable f = build_observable(c, space);
    check_compatible(space, f);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail("observable", e.what());
  }
  try {
    build_point(c, space);
  } catch (const Error& e) {
    fail("base_point", e.what());
  }
  validate_average(c, d);
  if (c.sweep) {
    static const std::set<std::string> params{"alpha", "omega", "beta", "delta"};
    if (!params.count(c.sweep->parameter)) fail("sweep.parameter", "expected alpha, omega, beta or delta");
    if (c.sweep->values.empty()) fail("sweep.values", "empty sweep");
    for (double v : c.sweep->values) {
      ExperimentConfig copy = c;
      copy.sweep.reset();
      if (c.sweep->parameter == "alpha") copy.average.alpha = v;
      if (c.sweep->parameter == "omega") copy.average.omega = v;
      if (c.sweep->parameter == "beta") copy.average.beta = v;
      if (c.sweep->parameter == "delta") copy.average.delta = v;
      validate_average(copy, d);
    }
  }
  if (c.prediction && c.prediction->gamma_prime && !(*c.prediction->gamma_prime > 0.0)) {
    fail("prediction.gamma_prime", "must be positive");
  }
  if (c.nilsearch) {
    if (c.space.kind != SpaceKind::heisenberg) fail("nilsearch", "needs a Heisenberg space");
    const auto& n = *c.nilsearch;
    if (!(n.delta > 0.0 && n.delta < 0.5)) fail("nilsearch.delta", "must lie in (0, 1/2)");
    if (!(n.C1 > 0.0) || !(n.C2 > 0.0)) fail("nilsearch", "C1 and C2 must be positive");
    if (!(n.R > 0.0)) fail("nilsearch.R", "must be positive");
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  try {
    check_keys(j,
               {"id", "seed", "threads", "record_timing", "space", "base_point", "observable", "average", "grid",
                "quadrature", "sweep", "prediction", "nilsearch"},
               "config");
    ExperimentConfig c;
    c.id = get_or<std::string>(j, "id", c.id, "config");
    if (c.id.empty() || c.id.find_first_of(",\"\n\r") != std::string::npos) {
      fail("id", "must be nonempty without commas, quotes or newlines");
    }
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed, "config");
    c.threads = get_or<unsigned>(j, "threads", c.threads, "config");
    c.record_timing = get_or<bool>(j, "record_timing", false, "config");
    c.space = parse_space(require(j, "space", "config"));
    if (j.contains("base_point")) {
      const json& b = j.at("base_point");
      check_keys(b, {"coords", "seed"}, "base_point");
      if (b.contains("coords") && b.contains("seed")) fail("base_point", "give coords or seed, not both");
      if (b.contains("coords")) c.base_point.coords = num_list(b.at("coords"), "base_point.coords");
      if (b.contains("seed")) c.base_point.seed = get_or<std::uint64_t>(b, "seed", 0, "base_point");
    }
    c.observable = parse_observable(require(j, "observable", "config"));
    c.average = parse_average(j.contains("average") ? j.at("average") : json::object());
    c.grid = parse_grid(require(j, "grid", "config"));
    if (j.contains("quadrature")) c.quadrature = parse_quadrature(j.at("quadrature"));
    c.quadrature.seed = c.seed;
    c.quadrature.threads = c.threads;
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      check_keys(s, {"parameter", "values"}, "sweep");
      c.sweep = SweepConfig{get_or<std::string>(s, "parameter", "", "sweep"),
                            num_list(require(s, "values", "sweep"), "sweep.values")};
    }
    if (j.contains("prediction")) {
      const json& p = j.at("prediction");
      check_keys(p, {"gamma_prime"}, "prediction");
      PredictionConfig pc;
      if (p.contains("gamma_prime")) {
        const json& g = p.at("gamma_prime");
        if (g.is_string() && g.get<std::string>() == "fit") {
          pc.gamma_prime.reset();
        } else {
          pc.gamma_prime = get_number(g, "prediction.gamma_prime");
        }
      }
      c.prediction = pc;
    }
    if (j.contains("nilsearch")) {
      const json& n = j.at("nilsearch");
      check_keys(n, {"delta", "C1", "C2", "R"}, "nilsearch");
      NilsearchConfig nc;
      nc.delta = num_or(n, "delta", nc.delta, "nilsearch");
      nc.C1 = num_or(n, "C1", nc.C1, "nilsearch");
      nc.C2 = num_or(n, "C2", nc.C2, "nilsearch");
      nc.R = num_or(n, "R", nc.R, "nilsearch");
      c.nilsearch = nc;
    }
    validate_config(c);
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig config_from_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["id"] = c.id;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["record_timing"] = c.record_timing;
  j["space"] = space_to_json(c.space);
  json b = json::object();
  if (c.base_point.coords) b["coords"] = *c.base_point.coords;
  if (c.base_point.seed) b["seed"] = *c.base_point.seed;
  j["base_point"] = b;
  j["observable"] = observable_to_json(c.observable);
  j["average"] = average_to_json(c.average);
  j["grid"] = grid_to_json(c.grid);
  j["quadrature"] = quadrature_to_json(c.quadrature);
  if (c.sweep) j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
  if (c.prediction) {
    j["prediction"] = {{"gamma_prime", c.prediction->gamma_prime ? json(*c.prediction->gamma_prime) : json("fit")}};
  }
  if (c.nilsearch) {
    j["nilsearch"] = {{"delta", c.nilsearch->delta}, {"C1", c.nilsearch->C1}, {"C2", c.nilsearch->C2}, {"R", c.nilsearch->R}};
  }
  return j;
}

Space build_space(const SpaceConfig& c) {
  switch (c.kind) {
    case SpaceKind::torus: {
      if (c.action.empty()) return Space{identity_torus(c.n)};
      const int d = static_cast<int>(c.action.front().size());
      std::vector<double> a;
      for (const auto& row : c.action) {
        for (const auto& p : row) a.push_back(p.value);
      }
      return Space{make_torus(c.n, d, a)};
    }
    case SpaceKind::heisenberg: {
      HeisenbergProductSpace h;
      for (const auto& f : c.factors) h.factors.push_back({f.alpha.value, f.beta.value, f.gamma.value});
      h.minimal = space_warnings(c).empty();
      return Space{h};
    }
    case SpaceKind::modular:
      return Space{ModularProductSpace{c.d}};
  }
  throw ConfigError("space: unknown kind");
}

Observable build_observable(const ExperimentConfig& c, const Space& space) {
  const auto& o = c.observable;
  if (o.type == "constant") return Observable{Constant{o.value}, 2, std::nullopt};
  if (o.type == "character") return character(o.freq);
  if (o.type == "abelian") return abelian_character(o.freq);
  if (o.type == "central") return central_character(o.freq);
  if (o.type == "trig") {
    TrigPolynomial p;
    p.n = static_cast<int>(o.terms.front().n.size());
    for (const auto& t : o.terms) {
      p.freqs.push_back(t.n);
      p.coeffs.push_back(t.coeff);
    }
    return Observable{p, 2, std::nullopt};
  }
  if (o.type == "bump") {
    return make_bump(space, o.c, o.w, o.factors, o.centered, o.samples, o.seed.value_or(c.seed));
  }
  throw ConfigError("observable: unknown type '" + o.type + "'");
}

Point build_point(const ExperimentConfig& c, const Space& space) {
  if (c.base_point.coords) {
    Point raw{space.kind(), *c.base_point.coords};
    if (static_cast<int>(raw.c.size()) != space.coord_count()) {
      throw DimensionError("base point needs " + std::to_string(space.coord_count()) + " coordinates");
    }
    validate_point(space, raw);
    return reduce(space, raw);
  }
  return haar_sample(space, c.base_point.seed.value_or(c.seed));
}

std::vector<std::string> space_warnings(const SpaceConfig& c) {
  std::vector<std::string> out;
  if (c.kind != SpaceKind::heisenberg) return out;
  for (std::size_t i = 0; i < c.factors.size(); ++i) {
    const auto& f = c.factors[i];
    bool dependent = is_rational(f.alpha) || is_rational(f.beta);
    const SqrtForm a = sqrt_form(f.alpha.expr), b = sqrt_form(f.beta.expr);
    if (a.ok && b.ok && squarefree_part(a.radicand) == squarefree_part(b.radicand)) dependent = true;
    if (dependent) {
      out.push_back("heisenberg factor " + std::to_string(i) +
                    ": 1, alpha, beta are rationally dependent; the flow is not minimal");
    }
  }
  return out;
}

std::optional<std::string_view> preset_text(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return std::string_view(p.text);
  }
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

}  // namespace speq
