#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rmflab {

// Raised when the estimated inner-loop work exceeds the budget and --force was
// not given. The CLI maps it to exit code 2.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kBudgetLimit = 1e11;

using CsvCell = std::variant<std::int64_t, double>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
  // Header line plus one line per row; doubles carry 17 significant digits.
  std::string to_string() const;
};

// Labelled per-row seeds, recorded so a manifest can rebuild every per-trial
// seed via derive_seed.
struct SeedLedger {
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  void note(std::string label, std::uint64_t seed) { entries.emplace_back(std::move(label), seed); }
};

// One row per x: (x, E1_hat, stderr, ratio) with
// ratio = E1_hat (ln ln x)^{1/4} / sqrt(x), all-ones coefficients.
CsvTable exp_harper_ratio(std::vector<std::int64_t> x_grid, std::int64_t trials,
                          std::uint64_t seed, int workers, bool force = false,
                          SeedLedger* ledger = nullptr);

// One row per R: (R, |A_R|, E1_hat, stderr, ratio = E1_hat / sqrt(|A_R|)),
// rough-number coefficients at fixed x. family = "interval" reuses the same
// machinery for sums over (x, x+y]: the grid entries are then the lengths y
// and |A_R| is y.
CsvTable exp_threshold(std::int64_t x, std::vector<double> r_grid, std::int64_t trials,
                       std::uint64_t seed, int workers, bool force = false,
                       SeedLedger* ledger = nullptr, const std::string& family = "rough");

// Single row (lhs, rhs, ratio): lhs the Monte Carlo E1 over rough numbers,
// rhs = sqrt(x/ln x) times the Monte Carlo mean of (int |F_0|^2 dt)^{1/2},
// both on independent seed streams.
CsvTable exp_reduction(std::int64_t x, double r, std::int64_t trials, std::uint64_t seed,
                       int workers, bool force = false, SeedLedger* ledger = nullptr);

// Single row (lhs, bound, ratio): lhs the Monte Carlo mean of
// (int_L |F|^2 dt)^2 at s = 1/2 + 4V/ln x, bound = (ln x/(V ln R))^2.
CsvTable exp_correlation(double x, double r, double v, std::int64_t samples, std::uint64_t seed,
                         int workers, bool force = false, SeedLedger* ledger = nullptr);

// One row per K: (K, E1, ratio = E1 / ln K), the exact mean modulus of the
// geometric-progression sum via quadrature; deterministic, no Monte Carlo.
CsvTable exp_geometric(std::int64_t p, std::vector<std::int64_t> k_grid,
                       SeedLedger* ledger = nullptr);

// One row per N with the exact energies of the all-ones and additive
// character families, normalized by N^2, plus the kurtosis ratios
// E|S|^4 / (E|S|^2)^2.
CsvTable exp_clt_energy(std::vector<std::int64_t> n_grid, double theta,
                        SeedLedger* ledger = nullptr);

// Exact E1 for the geometric progression at a given length (also drives
// exp_geometric); absolute quadrature target 1e-9.
double geometric_mean_modulus(std::int64_t k);

}  // namespace rmflab
