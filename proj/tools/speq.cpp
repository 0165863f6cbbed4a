// speq: experiment runner for spherical and flow averages.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "speq/analysis.hpp"
#include "speq/config.hpp"
#include "speq/error.hpp"
#include "speq/kernels.hpp"
#include "speq/runner.hpp"

using nlohmann::json;
using namespace speq;
using namespace speq::kernels;

namespace {

enum Exit { kOk = 0, kFound = 1, kInvalid = 2, kCapacity = 3, kInternal = 4 };

struct Common {
  std::string config_path;
  std::string preset;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* sub, Common& c, bool with_out = true) {
  sub->add_option("--config", c.config_path, "Experiment config (JSON)");
  sub->add_option("--preset", c.preset, "Built-in preset name");
  if (with_out) sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--seed", c.seed, "Global seed override");
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig load_config(const Common& c) {
  if (c.config_path.empty() == c.preset.empty()) throw ConfigError("give exactly one of --config and --preset");
  std::string text;
  if (!c.preset.empty()) {
    const auto t = preset_text(c.preset);
    if (!t) throw ConfigError("unknown preset '" + c.preset + "'");
    text = std::string(*t);
  } else {
    text = read_text(c.config_path);
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (c.seed) j["seed"] = *c.seed;
  if (c.threads) j["threads"] = *c.threads;
  return config_from_json(j);
}

int exit_code_for(const Error& e) {
  const std::string k = e.kind();
  if (k == "capacity") return kCapacity;
  return kInvalid;
}

json error_json(const std::string& kind, const std::string& message, int code) {
  return {{"status", "error"}, {"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}};
}

// Reports the error on stderr and, when an output directory is known, in report.json.
int fail(const std::string& kind, const std::string& message, int code, const std::string& out_dir) {
  const json j = error_json(kind, message, code);
  std::cerr << j.dump() << "\n";
  if (!out_dir.empty()) {
    try {
      std::filesystem::create_directories(out_dir);
      write_text(std::filesystem::path(out_dir) / "report.json", j.dump(2) + "\n");
    } catch (...) {
    }
  }
  return code;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speq: spherical and flow averages on homogeneous spaces"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, nil_opts;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
  add_common(run_cmd, run_opts);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a config's parameter sweep");
  add_common(sweep_cmd, sweep_opts);
  std::string sweep_param;
  std::vector<double> sweep_values;
  sweep_cmd->add_option("--param", sweep_param, "Swept parameter (alpha, omega, beta, delta)");
  sweep_cmd->add_option("--values", sweep_values, "Sweep values")->delimiter(',');

  auto* fit_cmd = app.add_subcommand("fit", "Fit decays from an existing results.csv");
  std::string fit_in, fit_out;
  Common fit_opts;
  fit_cmd->add_option("--in", fit_in, "Directory with results.csv")->required();
  fit_cmd->add_option("--out", fit_out, "Output directory (default: --in)");
  fit_cmd->add_option("--config", fit_opts.config_path, "Config supplying parameters");
  fit_cmd->add_option("--preset", fit_opts.preset, "Preset supplying parameters");

  auto* predict_cmd = app.add_subcommand("predict", "Evaluate a prediction formula");
  std::string quantity;
  int pd = 2;
  double gamma_prime = 1.0, alpha = 0.0, pR = 1.0, pdelta = 0.1, pL = 0.0;
  predict_cmd->add_option("quantity", quantity, "omega-critical, delta, br-rate or truncation")
      ->required()
      ->check(CLI::IsMember({"omega-critical", "delta", "br-rate", "truncation"}));
  predict_cmd->add_option("--d", pd, "Acting dimension");
  predict_cmd->add_option("--gamma-prime", gamma_prime, "Disjointness exponent");
  predict_cmd->add_option("--alpha", alpha, "Bochner-Riesz order");
  predict_cmd->add_option("--R", pR, "Radius");
  predict_cmd->add_option("--delta", pdelta, "Mollifier scale");
  predict_cmd->add_option("--L", pL, "Truncation exponent (0: default d + 2)");

  auto* nil_cmd = app.add_subcommand("nilsearch", "Search for an obstructing horizontal character");
  add_common(nil_cmd, nil_opts);

  auto* kernels_cmd = app.add_subcommand("kernels", "Tabulate kernel values as CSV");
  std::string kkind = "ball", kout;
  int kd = 2, kcount = 20;
  double kR = 10.0, komega = 0.5, kalpha = 0.0, kdelta = 0.1, rmin = 0.1, rmax = 5.0;
  kernels_cmd->add_option("--kind", kkind, "ball, sphere, annulus, bochner_riesz or mollifier");
  kernels_cmd->add_option("--d", kd, "Dimension");
  kernels_cmd->add_option("--R", kR, "Annulus radius");
  kernels_cmd->add_option("--omega", komega, "Annulus thickness exponent");
  kernels_cmd->add_option("--alpha", kalpha, "Bochner-Riesz order");
  kernels_cmd->add_option("--delta", kdelta, "Mollifier scale");
  kernels_cmd->add_option("--r-min", rmin, "First r");
  kernels_cmd->add_option("--r-max", rmax, "Last r");
  kernels_cmd->add_option("--count", kcount, "Number of r values")->check(CLI::PositiveNumber);
  kernels_cmd->add_option("--out", kout, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  std::string out_dir;
  try {
    if (*run_cmd || *sweep_cmd) {
      Common& o = *run_cmd ? run_opts : sweep_opts;
      out_dir = o.out;
      ExperimentConfig c = load_config(o);
      if (*sweep_cmd) {
        if (!sweep_param.empty() || !sweep_values.empty()) {
          json j = config_to_json(c);
          j["sweep"] = {{"parameter", sweep_param}, {"values", sweep_values}};
          c = config_from_json(j);
        }
        if (!c.sweep) throw ConfigError("sweep: config has no sweep block and no --param/--values");
      }
      const RunOutput r = run(c);
      write_outputs(r, o.out);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      print_json({{"status", "ok"}, {"experiment_id", c.id}, {"rows", r.rows.size()}, {"fits", r.fits}});
      return kOk;
    }
    if (*nil_cmd) {
      out_dir = nil_opts.out;
      const ExperimentConfig c = load_config(nil_opts);
      const RunOutput r = run_nilsearch(c);
      write_outputs(r, nil_opts.out);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      print_json(to_json(*r.obstruction));
      return r.obstruction->found ? kFound : kOk;
    }
    if (*fit_cmd) {
      out_dir = fit_out.empty() ? fit_in : fit_out;
      const auto rows = parse_results_csv(read_text(std::filesystem::path(fit_in) / "results.csv"));
      std::vector<ExperimentConfig> configs;
      if (!fit_opts.config_path.empty() || !fit_opts.preset.empty()) {
        configs = expand_sweep(load_config(fit_opts));
      }
      const json fits = fit_rows(rows, configs);
      std::filesystem::create_directories(out_dir);
      write_text(std::filesystem::path(out_dir) / "fit.json", json{{"fits", fits}}.dump(2) + "\n");
      print_json({{"status", "ok"}, {"fits", fits}});
      return kOk;
    }
    if (*predict_cmd) {
      json j{{"quantity", quantity}, {"d", pd}};
      if (quantity == "omega-critical") {
        const auto p = predict_omega_critical(pd, gamma_prime);
        j["gamma_prime"] = gamma_prime;
        j["value"] = p.value;
        if (p.clamped) j["warning"] = "formula is non-positive; clamped to 0";
      } else if (quantity == "delta") {
        j["gamma_prime"] = gamma_prime;
        j["R"] = pR;
        j["value"] = choose_delta_annulus(pd, gamma_prime, pR);
      } else if (quantity == "br-rate") {
        const auto p = predict_br_rate(pd, alpha, gamma_prime);
        j["alpha"] = alpha;
        j["gamma_prime"] = gamma_prime;
        j["value"] = p.value;
        if (p.singular) j["warning"] = "alpha = -1 is singular: the smoothing error does not vanish";
      } else {
        j["delta"] = pdelta;
        j["L"] = pL > 0.0 ? pL : default_truncation_exponent(pd);
        j["radius"] = truncation_radius(pdelta, pd, pL);
        j["tail"] = truncation_tail(pdelta, pd, pL);
        j["value"] = j["tail"];
      }
      if (j.contains("warning")) std::cerr << "warning: " << j["warning"].get<std::string>() << "\n";
      print_json(j);
      return kOk;
    }
    if (*kernels_cmd) {
      RadialKernel k;
      k.kind = kernel_kind_from_string(kkind);
      k.d = kd;
      k.R = kR;
      k.omega = komega;
      k.alpha = kalpha;
      k.delta = kdelta;
      if (!(rmax >= rmin)) throw ParameterError("need r-max >= r-min");
      std::string csv = "r,value\n";
      for (int i = 0; i < kcount; ++i) {
        const double r = kcount == 1 ? rmin : rmin + (rmax - rmin) * i / (kcount - 1);
        csv += format_double(r) + "," + format_double(k(r)) + "\n";
      }
      if (kout.empty()) {
        std::cout << csv;
      } else {
        write_text(kout, csv);
      }
      return kOk;
    }
  } catch (const Error& e) {
    return fail(e.kind(), e.what(), exit_code_for(e), out_dir);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kInternal, out_dir);
  }
  return kInternal;
}
