#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rmflab/experiments.hpp"

namespace rmflab {

using ConfigValue =
    std::variant<std::int64_t, double, std::string, std::vector<std::int64_t>, std::vector<double>>;

// Experiment description: a flat key = value table (TOML-compatible subset:
// integers, floats, quoted strings, homogeneous arrays, # comments). The keys
// experiment, master_seed, workers and out are reserved; everything else is an
// experiment parameter.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t master_seed = 0;
  int workers = 0;  // 0: resolve from RMFLAB_WORKERS or hardware at run time
  std::string out_path;
  std::map<std::string, ConfigValue> params;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::vector<std::int64_t> get_int_grid(const std::string& key,
                                         std::vector<std::int64_t> fallback) const;
  std::vector<double> get_double_grid(const std::string& key,
                                      std::vector<double> fallback) const;
};

ExperimentConfig parse_config(const std::string& text);
// Canonical text form; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const ExperimentConfig& config);

// Fills in the documented defaults for the named experiment, leaving present
// keys untouched. Throws std::domain_error for unknown experiment names.
void apply_experiment_defaults(ExperimentConfig& config);

// Runs the experiment described by the (already defaulted) config.
CsvTable run_experiment(const ExperimentConfig& config, bool force, SeedLedger* ledger);

// JSON side file: config echo, artifact version, wall clock, seed ledger.
std::string manifest_json(const ExperimentConfig& config, double wall_seconds,
                          const SeedLedger& ledger, const std::string& csv_path);

// Extracts the embedded canonical config from a manifest produced above.
ExperimentConfig config_from_manifest(const std::string& manifest_text);

const std::vector<std::string>& experiment_names();
// One usage paragraph per experiment (parameters and defaults), for --help.
std::string experiment_help();

}  // namespace rmflab
