#pragma once

#include <map>
#include <string>
#include <vector>

#include "riesz/estimators.hpp"
#include "riesz/experiment_spec.hpp"
#include "riesz/sampler.hpp"

namespace riesz {

inline constexpr int kReportSchemaVersion = 1;

/// One checked statement in report.json.
struct Claim {
  std::string id;
  std::string description;
  double empirical = 0.0;
  double empirical_stderr = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

/// A named CSV table: header plus rows of numbers.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::vector<Claim> claims;
  std::map<std::string, Table> tables;

  bool all_pass() const;
  /// Versioned JSON text; numbers use the shortest round-trip form, NaN as null.
  std::string to_json() const;
};

/// Recorded series by observable name.
using SeriesMap = std::map<std::string, ChainSeries>;

/// Runs the estimators that apply to the recorded observables and turns them
/// into claims. Estimator failures (for instance an ESS gate) become failing
/// claims with a note rather than exceptions.
Report analyze(const ExperimentSpec& spec, const SeriesMap& series);

/// File name (without directory) used for an observable's series CSV.
std::string series_file_name(const std::string& observable);

/// Samples and writes a complete artifact directory:
///   spec.cfg, metadata.json, series/<name>.csv, report.json, tables/<table>.csv.
/// The directory is created if its parent exists (ConfigError otherwise).
/// Returns the report.
Report run_experiment(const ExperimentSpec& spec, const std::string& out_dir, std::size_t threads);

/// Re-reads an artifact directory written by run_experiment, recomputes and
/// rewrites report.json and the tables. ConfigError when files are missing.
Report analyze_run(const std::string& dir);

/// Writes a series CSV (header chain,sweep,value; 17 significant digits).
void write_series_csv(const std::string& path, const RunResult& result, const std::string& observable);
/// Reads a series CSV back into per-chain vectors.
ChainSeries read_series_csv(const std::string& path);

}  // namespace riesz
