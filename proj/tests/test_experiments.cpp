#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmflab/barriers.hpp"
#include "rmflab/config.hpp"
#include "rmflab/euler.hpp"
#include "rmflab/experiments.hpp"
#include "rmflab/kahan.hpp"
#include "rmflab/moments.hpp"
#include "rmflab/ntcore.hpp"
#include "rmflab/rng.hpp"
#include "rmflab/sampler.hpp"

using namespace rmflab;

namespace {

double cell(const CsvTable& t, std::size_t row, std::size_t col) {
  const auto& c = t.rows.at(row).at(col);
  if (std::holds_alternative<std::int64_t>(c)) return static_cast<double>(std::get<std::int64_t>(c));
  return std::get<double>(c);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("config parsing and canonical round-trip") {
  const std::string text =
      "# comment\n"
      "experiment = \"exp_threshold\"\n"
      "master_seed = 18446744073709551615\n"
      "workers = 3\n"
      "out = \"run.csv\"\n"
      "x = 100000\n"
      "r_grid = [2, 10.5, 100]   # mixed -> doubles\n"
      "trials = 20000\n"
      "label = \"smoke\"\n";
  const auto config = parse_config(text);
  CHECK(config.experiment == "exp_threshold");
  CHECK(config.master_seed == 18446744073709551615ull);
  CHECK(config.workers == 3);
  CHECK(config.out_path == "run.csv");
  CHECK(config.get_int("x", 0) == 100000);
  CHECK(config.get_int("trials", 0) == 20000);
  const auto grid = config.get_double_grid("r_grid", {});
  REQUIRE(grid.size() == 3);
  CHECK(grid[1] == doctest::Approx(10.5));

  const std::string canon = serialize_config(config);
  const auto reparsed = parse_config(canon);
  CHECK(serialize_config(reparsed) == canon);
  CHECK(reparsed.master_seed == config.master_seed);
  CHECK(reparsed.params == config.params);

  CHECK_THROWS_AS(parse_config("oops\n"), std::domain_error);
  CHECK_THROWS_AS(parse_config("x = \n"), std::domain_error);
  CHECK_THROWS_AS(parse_config("x = [1, zebra]\n"), std::domain_error);
}

TEST_CASE("defaults fill only missing keys") {
  ExperimentConfig config;
  config.experiment = "exp_reduction";
  config.params["trials"] = std::int64_t{500};
  apply_experiment_defaults(config);
  CHECK(config.get_int("trials", 0) == 500);
  CHECK(config.get_int("x", 0) == 100000);
  CHECK(config.get_double("r", 0.0) == doctest::Approx(11.0));

  ExperimentConfig bad;
  bad.experiment = "exp_unknown";
  CHECK_THROWS_AS(apply_experiment_defaults(bad), std::domain_error);
}

TEST_CASE("geometric experiment: exact values") {
  CHECK(geometric_mean_modulus(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(geometric_mean_modulus(2) ==
        doctest::Approx(4.0 / 3.14159265358979323846).epsilon(1e-9));
  const auto table = exp_geometric(2, {1, 2, 1000});
  CHECK(table.header == std::vector<std::string>{"K", "E1", "ratio"});
  const double ratio_1000 = cell(table, 2, 2);
  CHECK(ratio_1000 >= 0.3);
  CHECK(ratio_1000 <= 0.6);
}

TEST_CASE("clt energy experiment: exact contrasts") {
  const auto table = exp_clt_energy({1, 500, 2000}, std::sqrt(2.0));
  // N = 1: every ratio is 1.
  for (std::size_t col = 1; col <= 4; ++col) {
    CHECK(cell(table, 0, col) == doctest::Approx(1.0));
  }
  const double ones_500 = cell(table, 1, 1);
  const double ones_2000 = cell(table, 2, 1);
  CHECK(ones_2000 >= 1.2 * ones_500);
  const double achar_kurtosis = cell(table, 2, 4);
  CHECK(achar_kurtosis >= 1.5);
  CHECK(achar_kurtosis <= 2.5);
}

TEST_CASE("harper ratio experiment: bounds and budget guard") {
  const auto table = exp_harper_ratio({1000, 2000}, 10'000, 77, 2);
  CHECK(table.header == std::vector<std::string>{"x", "E1_hat", "stderr", "ratio"});
  REQUIRE(table.rows.size() == 2);
  for (std::size_t row = 0; row < 2; ++row) {
    const double x = cell(table, row, 0);
    const double e1 = cell(table, row, 1);
    CHECK(e1 <= std::sqrt(x));
    CHECK(e1 > 0.0);
  }
  const double ratio_1e3 = cell(table, 0, 3);
  CHECK(ratio_1e3 >= 0.2);
  CHECK(ratio_1e3 <= 2.0);

  CHECK_THROWS_AS(exp_harper_ratio({10'000'000, 9'000'000}, 10'000, 1, 2), budget_error);
  CHECK_THROWS_AS(exp_harper_ratio({500}, 10'000, 1, 2), std::domain_error);
  CHECK_THROWS_AS(exp_harper_ratio({1000}, 100, 1, 2), std::domain_error);
}

TEST_CASE("threshold experiment: cardinalities and ratio ceiling") {
  const SpfTable spf = SpfTable::build(20'000);
  const auto table = exp_threshold(20'000, {2.0, 10.0, 141.0}, 10'000, 5, 2);
  CHECK(table.header == std::vector<std::string>{"R", "|A_R|", "E1_hat", "stderr", "ratio"});
  REQUIRE(table.rows.size() == 3);
  for (std::size_t row = 0; row < 3; ++row) {
    const double r = cell(table, row, 0);
    const auto card = static_cast<std::uint64_t>(cell(table, row, 1));
    CHECK(card == count_rough({20'000, r}, spf));
    CHECK(cell(table, row, 4) <= 1.0);
  }
  // R at sqrt(x): independent unit phasors, complex-Gaussian mean modulus.
  const double ratio_top = cell(table, 2, 4);
  CHECK(ratio_top >= 0.8);
  CHECK(ratio_top <= 0.95);

  CHECK_THROWS_AS(exp_threshold(20'000, {150.0}, 10'000, 5, 2), std::domain_error);
}

TEST_CASE("threshold machinery drives the interval family") {
  const auto table = exp_threshold(10'000, {100.0, 1000.0}, 10'000, 15, 2, false, nullptr,
                                   "interval");
  REQUIRE(table.rows.size() == 2);
  for (std::size_t row = 0; row < 2; ++row) {
    const double y = cell(table, row, 0);
    CHECK(cell(table, row, 1) == y);  // second moment of the indicator of (x, x+y]
    CHECK(cell(table, row, 4) <= 1.0);
    CHECK(cell(table, row, 4) > 0.5);  // near-Gaussian short sums
  }
  CHECK_THROWS_AS(exp_threshold(10'000, {2.0}, 10'000, 15, 2, false, nullptr, "bogus"),
                  std::domain_error);
}

TEST_CASE("reduction experiment: positivity and trial-doubling stability") {
  const auto coarse = exp_reduction(10'000, 11.0, 500, 9, 2);
  const auto fine = exp_reduction(10'000, 11.0, 1000, 9, 2);
  CHECK(cell(coarse, 0, 1) > 0.0);
  const double r0 = cell(coarse, 0, 2);
  const double r1 = cell(fine, 0, 2);
  CHECK(r0 >= 0.05);
  CHECK(r0 <= 20.0);
  CHECK(r1 / r0 <= 2.0);
  CHECK(r0 / r1 <= 2.0);
}

TEST_CASE("correlation experiment: band, Jensen, and barrier nesting") {
  const double x = 1e6;
  const double r = std::exp(std::exp(1.5));
  const double v = 8.0;
  const std::uint64_t seed = 404;
  const auto table = exp_correlation(x, r, v, 60, seed, 2);
  CHECK(table.header == std::vector<std::string>{"lhs", "bound", "ratio"});
  const double lhs = cell(table, 0, 0);
  CHECK(cell(table, 0, 2) <= 50.0);

  // Recompute the per-sample restricted integrals with the library primitives
  // and the same seed derivation.
  auto restricted_integral = [&](const BarrierSpecL& spec, const RmfSample& s) {
    const int m = min_grid_points(x);
    const double h = 1.0 / (m - 1);
    const double sigma = 4.0 * v / std::log(x);
    const auto log_abs2 = log_abs_sq_grid(s, std::nextafter(r, 0.0), x, sigma, -0.5, h, m);
    KahanSum acc;
    for (int j = 0; j < m; ++j) {
      const double t = -0.5 + h * j;
      if (!event_l(s, spec, t)) continue;
      acc.add(((j == 0 || j == m - 1) ? 0.5 : 1.0) * std::exp(log_abs2[static_cast<std::size_t>(j)]));
    }
    return h * acc.value();
  };
  const auto spec = BarrierSpecL::make(x, r, v);
  const auto primes = PrimeList::build(static_cast<std::uint64_t>(x));
  KahanSum mean_acc, sq_acc;
  RmfSample s;
  for (int i = 0; i < 60; ++i) {
    RmfSample::generate_into(s, static_cast<std::uint64_t>(x), Model::kSteinhaus,
                             derive_seed(seed, static_cast<std::uint64_t>(i)), primes);
    const double integral = restricted_integral(spec, s);
    mean_acc.add(integral);
    sq_acc.add(integral * integral);
  }
  const double mean = mean_acc.value() / 60.0;
  CHECK(sq_acc.value() / 60.0 == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(lhs >= mean * mean - 1e-12);  // Jensen on the same data

  // Shrinking the barrier constant shrinks the restricted integral.
  BarrierSpecL narrow = spec;
  narrow.dx = spec.dx - 3.0;
  RmfSample s2;
  RmfSample::generate_into(s2, static_cast<std::uint64_t>(x), Model::kSteinhaus, derive_seed(seed, 0),
                           primes);
  CHECK(restricted_integral(narrow, s2) <= restricted_integral(spec, s2) + 1e-15);
}

TEST_CASE("csv cells print with 17 significant digits") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows.push_back({std::int64_t{42}, 0.1});
  CHECK(t.to_string() == "a,b\n42,0.10000000000000001\n");
}

TEST_CASE("cli binary: reproducible bytes, manifest round trip, exit codes") {
  const char* bin = std::getenv("RMFLAB_BIN");
  REQUIRE(bin != nullptr);
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rmflab_cli_test";
  fs::create_directories(dir);
  const auto run = [&](const std::string& args) {
    const std::string cmd = std::string(bin) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };

  const fs::path cfg = dir / "geo.toml";
  {
    std::ofstream out(cfg);
    out << "experiment = \"exp_geometric\"\nmaster_seed = 11\np = 3\nk_grid = [1, 2, 64]\n";
  }
  const fs::path csv_a = dir / "a.csv";
  const fs::path csv_b = dir / "b.csv";
  CHECK(run("--config " + cfg.string() + " --out " + csv_a.string()) == 0);
  CHECK(run("--config " + cfg.string() + " --out " + csv_b.string() + " --workers 2") == 0);
  const std::string bytes_a = slurp(csv_a.string());
  CHECK(bytes_a == slurp(csv_b.string()));
  CHECK(bytes_a.substr(0, bytes_a.find('\n')) == "K,E1,ratio");

  // Manifest next to the CSV embeds the resolved config; re-running from it
  // reproduces the CSV byte for byte.
  const fs::path manifest = fs::path(csv_a.string() + ".manifest.json");
  REQUIRE(fs::exists(manifest));
  const fs::path csv_c = dir / "c.csv";
  CHECK(run("--from-manifest " + manifest.string() + " --out " + csv_c.string()) == 0);
  CHECK(bytes_a == slurp(csv_c.string()));

  CHECK(run("exp_bogus --out " + (dir / "x.csv").string()) == 1);

  const fs::path big = dir / "big.toml";
  {
    std::ofstream out(big);
    out << "experiment = \"exp_harper_ratio\"\nx_grid = [10000000]\ntrials = 100000\n";
  }
  CHECK(run("--config " + big.string() + " --out " + (dir / "y.csv").string()) == 2);
}
