#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "speq/analysis.hpp"
#include "speq/config.hpp"
#include "speq/nilsearch.hpp"

namespace speq {

/// One line of results.csv.
struct ResultRow {
  std::string experiment_id;
  double R = 0.0;
  cplx value{0.0, 0.0};
  double error = 0.0;
  double seconds = 0.0;
};

struct RunOutput {
  std::vector<ResultRow> rows;
  nlohmann::json fits = nlohmann::json::array();
  std::vector<std::string> warnings;
  std::optional<ObstructionReport> obstruction;
  nlohmann::json report;
};

/// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double v);

/// The average selected by the config at radius R.
AverageResult evaluate_at(const ExperimentConfig& c, const Space& space, const Observable& f, const Point& x,
                          double R);

/// The configs a run expands to: the config itself, or one per sweep value with
/// id "<id>:<parameter>=<value>".
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& c);

/// Fit record for one experiment. `c` supplies the family parameters and
/// prediction inputs; without it only the fit is reported.
nlohmann::json fit_record(const std::string& id, const DecaySeries& series, const ExperimentConfig* c);

/// Runs every expanded experiment, fits each decay and, when configured, the
/// obstruction search.
RunOutput run(const ExperimentConfig& c);

/// Obstruction search only.
RunOutput run_nilsearch(const ExperimentConfig& c);

std::string results_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(const std::string& text);

/// Fits every experiment id found in the rows, in first-appearance order.
/// Configs whose id matches supply parameters.
nlohmann::json fit_rows(const std::vector<ResultRow>& rows, const std::vector<ExperimentConfig>& configs);

/// results.csv, fit.json and report.json in `dir` (created if missing).
void write_outputs(const RunOutput& out, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace speq
