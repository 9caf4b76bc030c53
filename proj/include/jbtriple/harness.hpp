#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jbtriple/optimize.hpp"
#include "jbtriple/serialize.hpp"

namespace jbt {

struct RunConfig {
  std::uint64_t seed = 7;
  std::vector<std::string> dims;  // space specs; empty means the suite's defaults
  int samples = 100;
  double tol_algebraic = 1e-10;
  double tol_opt = 1e-4;
  int multistarts = 16;
  int budget = 2000;  // constants suite: total local-search iterations
  std::string out_dir;

  /// Throws ConfigError on nonpositive tolerances, samples or multistarts
  /// and on unparsable space specs.
  void validate() const;
  std::vector<TripleSpace> spaces() const;
};

RunConfig config_from_json(const json& j);
json to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

struct VerificationReport {
  std::string suite;
  std::string check;
  std::string anchor;  // the statement being checked
  std::string space;
  json instance;
  int samples = 0;
  double max_residual = 0;
  double mean_residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::uint64_t seed = 0;
  double millis = 0;
};

json to_json(const VerificationReport& r);
std::string csv_header();
std::string to_csv_row(const VerificationReport& r);

/// Writes <dir>/<stem>.json and <dir>/<stem>.csv. Throws ConfigError when
/// the directory cannot be written.
void write_reports(const std::vector<VerificationReport>& reports, const std::string& dir, const std::string& stem);

const std::vector<std::string>& suite_names();

/// Runs one suite (or "all"). Deterministic given (config, suite).
std::vector<VerificationReport> run_suite(const RunConfig& config, const std::string& suite);

/// Exit status for a finished run: 0 iff every report passed; the
/// constants suite is exploratory and never fails the run.
int exit_status(const std::vector<VerificationReport>& reports);

/// Random element of `spec` drawn from `seed`, serialized.
json generate_instance(const std::string& spec, std::uint64_t seed);

json to_json(const ConstantInstance& inst);
ConstantInstance constant_instance_from_json(const json& j);

}  // namespace jbt
