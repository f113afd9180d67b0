#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rmflab/config.hpp"
#include "rmflab/parallel.hpp"
#include "rmflab/version.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::domain_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::domain_error("cannot write " + path);
  out << content;
}

int resolve_worker_request(int cli_workers, int config_workers) {
  if (cli_workers > 0) return cli_workers;
  if (const char* env = std::getenv("RMFLAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  if (config_workers > 0) return config_workers;
  return rmflab::resolve_workers(0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("rmflab ") + rmflab::kVersion +
               " - random multiplicative function experiments\n\n" +
               rmflab::experiment_help()};
  app.get_formatter()->column_width(28);

  std::string experiment;
  std::string config_path;
  std::string manifest_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;
  bool force = false;

  app.add_option("experiment", experiment, "experiment name (see list above)");
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--from-manifest", manifest_path, "re-run the config embedded in a manifest");
  app.add_option("--seed", seed, "master seed (overrides config)")->each([&](const std::string&) {
    seed_given = true;
  });
  app.add_option("--workers", workers, "worker threads (overrides config and RMFLAB_WORKERS)");
  app.add_option("--out", out_path, "output CSV path (manifest goes next to it)");
  app.add_flag("--force", force, "run even when the work estimate exceeds the budget");

  CLI11_PARSE(app, argc, argv);

  try {
    rmflab::ExperimentConfig config;
    if (!manifest_path.empty()) {
      config = rmflab::config_from_manifest(read_file(manifest_path));
    } else if (!config_path.empty()) {
      config = rmflab::parse_config(read_file(config_path));
    }
    if (!experiment.empty()) config.experiment = experiment;
    if (config.experiment.empty()) {
      std::cerr << "error: no experiment given (positional argument or config key)\n";
      return 1;
    }
    if (seed_given) config.master_seed = seed;
    config.workers = resolve_worker_request(workers, config.workers);
    if (!out_path.empty()) config.out_path = out_path;
    if (config.out_path.empty()) config.out_path = config.experiment + ".csv";
    rmflab::apply_experiment_defaults(config);

    rmflab::SeedLedger ledger;
    const auto start = std::chrono::steady_clock::now();
    const rmflab::CsvTable table = rmflab::run_experiment(config, force, &ledger);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    write_file(config.out_path, table.to_string());
    write_file(config.out_path + ".manifest.json",
               rmflab::manifest_json(config, wall, ledger, config.out_path));
    std::cout << config.experiment << ": " << table.rows.size() << " row(s) -> "
              << config.out_path << " (" << wall << " s, " << config.workers << " workers)\n";
    return 0;
  } catch (const rmflab::budget_error& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
