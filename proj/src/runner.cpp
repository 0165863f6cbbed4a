#include "speq/runner.hpp"

#include <chrono>
#include <charconv>
#include <fstream>
#include <sstream>

#include "speq/error.hpp"
#include "speq/kernels.hpp"

namespace speq {

using nlohmann::json;
using namespace kernels;

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

AverageResult evaluate_at(const ExperimentConfig& c, const Space& space, const Observable& f, const Point& x,
                          double R) {
  const auto& a = c.average;
  if (a.family == "twisted_ball") return twisted_ball_average(space, f, x, R, a.z, c.quadrature);
  if (a.family == "model_coefficient") return model_fourier_coefficient(space, f, x, R, a.n, c.quadrature);
  AverageSpec s;
  s.family = family_from_string(a.family);
  s.R = R;
  s.omega = a.omega;
  s.alpha = a.alpha;
  s.beta = a.beta;
  s.delta = a.delta;
  s.direction = a.direction;
  s.scheme = c.quadrature;
  return average(space, f, x, s);
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& c) {
  if (!c.sweep) return {c};
  std::vector<ExperimentConfig> out;
  for (double v : c.sweep->values) {
    ExperimentConfig e = c;
    e.sweep.reset();
    const std::string& p = c.sweep->parameter;
    if (p == "alpha") e.average.alpha = v;
    if (p == "omega") e.average.omega = v;
    if (p == "beta") e.average.beta = v;
    if (p == "delta") e.average.delta = v;
    e.id = c.id + ":" + p + "=" + format_double(v);
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

json fit_json(const DecayFit& f) {
  return {{"exponent", f.exponent},
          {"intercept", f.intercept},
          {"residual_rms", f.residual_rms},
          {"half_width", f.half_width},
          {"points", f.points},
          {"dropped", f.dropped}};
}

std::optional<KernelKind> kernel_of(const std::string& family) {
  if (family == "ball" || family == "twisted_ball") return KernelKind::ball;
  if (family == "sphere") return KernelKind::sphere;
  if (family == "annulus") return KernelKind::annulus;
  if (family == "bochner_riesz") return KernelKind::bochner_riesz;
  return std::nullopt;
}

int action_dim_of(const ExperimentConfig& c) { return build_space(c.space).action_dim(); }

json predictions(const ExperimentConfig& c, int d, const std::optional<DecayFit>& fit, std::vector<std::string>& notes) {
  json p = json::object();
  std::optional<double> gp;
  if (c.prediction && c.prediction->gamma_prime) {
    gp = *c.prediction->gamma_prime;
    p["gamma_prime_source"] = "config";
  } else if (c.prediction) {
    p["gamma_prime_source"] = "fit";
    if (fit && fit->exponent < 0.0) gp = -fit->exponent;
  } else {
    return p;
  }
  if (!gp) {
    notes.push_back("no decay to use as gamma'; predictions skipped");
    p["gamma_prime"] = nullptr;
    return p;
  }
  p["gamma_prime"] = *gp;
  const auto radii = c.grid.radii();
  const double Rmax = radii.back();
  if (d >= 2) {
    const auto om = predict_omega_critical(d, *gp);
    p["omega_critical"] = {{"value", om.value}, {"clamped", om.clamped}};
    const double delta = choose_delta_annulus(d, *gp, Rmax);
    p["delta_annulus"] = {{"R", Rmax}, {"value", delta}};
    if (delta < 1.0) p["truncation_radius"] = truncation_radius(delta, d);
    if (c.average.family == "annulus") p["omega_above_critical"] = c.average.omega > om.value;
  }
  if (c.average.family == "bochner_riesz") {
    try {
      const auto r = predict_br_rate(d, c.average.alpha, *gp);
      p["br_rate"] = {{"value", r.value}, {"singular", r.singular}};
      if (r.singular) notes.push_back("alpha = -1: the smoothing error does not vanish");
    } catch (const Error& e) {
      p["br_rate"] = {{"error", e.what()}};
    }
  }
  return p;
}

}  // namespace

json fit_record(const std::string& id, const DecaySeries& series, const ExperimentConfig* c) {
  json rec;
  rec["experiment_id"] = id;
  json grid = json::array();
  for (const auto& p : series) grid.push_back(p.R);
  rec["grid"] = grid;
  std::vector<std::string> notes;
  std::optional<DecayFit> fit;
  try {
    fit = decay_fit(series);
    rec["status"] = "ok";
    rec["fit"] = fit_json(*fit);
  } catch (const FitRefused& e) {
    rec["status"] = "refused";
    rec["fit"] = nullptr;
    rec["refused_reason"] = e.what();
  }
  if (c != nullptr) {
    const int d = action_dim_of(*c);
    rec["d"] = d;
    rec["parameters"] = {{"family", c->average.family},
                         {"omega", c->average.omega},
                         {"alpha", c->average.alpha},
                         {"beta", c->average.beta},
                         {"delta", c->average.delta}};
    if (d >= 2) {
      rec["candidate_exponents"] = {{"sphere", -0.5 * (d - 1)}, {"ball", -0.5 * (d + 1)}};
    }
    const auto kind = kernel_of(c->average.family);
    rec["kernel_envelope"] = nullptr;
    if (kind) {
      try {
        const auto env = kernel_envelope(*kind, d, c->average.alpha);
        rec["kernel_envelope"] = {{"exponent", -env.exponent}, {"note", env.note}};
        if (fit) rec["fit_minus_envelope"] = fit->exponent + env.exponent;
      } catch (const Error&) {
      }
    }
    rec["predictions"] = predictions(*c, d, fit, notes);
  }
  rec["notes"] = notes;
  return rec;
}

namespace {

json report_base(const ExperimentConfig& c) {
  json r;
  r["status"] = "ok";
  r["experiment_id"] = c.id;
  r["config"] = config_to_json(c);
  return r;
}

ObstructionReport search(const ExperimentConfig& c, const Space& space) {
  const auto& n = *c.nilsearch;
  return obstruction_search(space, n.delta, n.C1, n.C2, n.R);
}

}  // namespace

RunOutput run(const ExperimentConfig& c) {
  RunOutput out;
  out.warnings = space_warnings(c.space);
  const Space space = build_space(c.space);
  const auto radii = c.grid.radii();
  for (const auto& e : expand_sweep(c)) {
    const Observable f = build_observable(e, space);
    const Point x = build_point(e, space);
    DecaySeries series;
    for (double R : radii) {
      const auto t0 = std::chrono::steady_clock::now();
      const AverageResult a = evaluate_at(e, space, f, x, R);
      const auto t1 = std::chrono::steady_clock::now();
      const double secs = e.record_timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
      out.rows.push_back({e.id, R, a.value, a.error, secs});
      series.push_back({R, a.value, a.error});
    }
    json rec = fit_record(e.id, series, &e);
    if (rec["status"] == "refused") {
      out.warnings.push_back(e.id + ": fit refused: " + rec["refused_reason"].get<std::string>());
    }
    for (const auto& n : rec["notes"]) out.warnings.push_back(e.id + ": " + n.get<std::string>());
    out.fits.push_back(std::move(rec));
  }
  if (c.nilsearch) out.obstruction = search(c, space);

  out.report = report_base(c);
  out.report["warnings"] = out.warnings;
  out.report["fits"] = out.fits;
  out.report["rows"] = out.rows.size();
  out.report["obstruction"] = out.obstruction ? to_json(*out.obstruction) : json(nullptr);
  return out;
}

RunOutput run_nilsearch(const ExperimentConfig& c) {
  if (!c.nilsearch) throw ConfigError("nilsearch: config has no nilsearch block");
  RunOutput out;
  out.warnings = space_warnings(c.space);
  out.obstruction = search(c, build_space(c.space));
  out.report = report_base(c);
  out.report["warnings"] = out.warnings;
  out.report["obstruction"] = to_json(*out.obstruction);
  return out;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string s = "experiment_id,R,re,im,abs,err,seconds\n";
  for (const auto& r : rows) {
    s += r.experiment_id;
    for (double v : {r.R, r.value.real(), r.value.imag(), std::abs(r.value), r.error, r.seconds}) {
      s += ',';
      s += format_double(v);
    }
    s += '\n';
  }
  return s;
}

namespace {

double parse_field(const std::string& f, std::size_t line) {
  double v = 0.0;
  const auto r = std::from_chars(f.data(), f.data() + f.size(), v);
  if (r.ec != std::errc() || r.ptr != f.data() + f.size()) {
    throw InputError("results.csv line " + std::to_string(line) + ": bad number '" + f + "'");
  }
  return v;
}

}  // namespace

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("results.csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "experiment_id,R,re,im,abs,err,seconds") throw InputError("results.csv: unexpected header");
  std::vector<ResultRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw InputError("results.csv line " + std::to_string(n) + ": expected 7 fields");
    rows.push_back({f[0], parse_field(f[1], n), {parse_field(f[2], n), parse_field(f[3], n)}, parse_field(f[5], n),
                    parse_field(f[6], n)});
  }
  if (rows.empty()) throw InputError("results.csv has no rows");
  return rows;
}

json fit_rows(const std::vector<ResultRow>& rows, const std::vector<ExperimentConfig>& configs) {
  std::vector<std::string> ids;
  for (const auto& r : rows) {
    if (std::find(ids.begin(), ids.end(), r.experiment_id) == ids.end()) ids.push_back(r.experiment_id);
  }
  json fits = json::array();
  for (const auto& id : ids) {
    DecaySeries s;
    for (const auto& r : rows) {
      if (r.experiment_id == id) s.push_back({r.R, r.value, r.error});
    }
    const ExperimentConfig* c = nullptr;
    for (const auto& cfg : configs) {
      if (cfg.id == id) c = &cfg;
    }
    fits.push_back(fit_record(id, s, c));
  }
  return fits;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f) throw InputError("cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_outputs(const RunOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (!out.rows.empty()) write_text(dir / "results.csv", results_csv(out.rows));
  if (!out.fits.empty()) write_text(dir / "fit.json", json{{"fits", out.fits}}.dump(2) + "\n");
  write_text(dir / "report.json", out.report.dump(2) + "\n");
}

}  // namespace speq
