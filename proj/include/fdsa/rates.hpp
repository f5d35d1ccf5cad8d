#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdsa/gradest.hpp"
#include "fdsa/optimize.hpp"
#include "fdsa/problems.hpp"

namespace fdsa {

/// Decay exponent of value(n) ~ C n^{-slope}.
struct SlopeFit {
  double slope = 0.0;  ///< positive for decaying curves
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  double intercept = 0.0;  ///< log C
  std::size_t points = 0;
};

/// OLS of log(value) on log(n) after dropping points in the first `burn_in`
/// fraction of the log-n range. Needs at least 8 remaining points.
SlopeFit fit_loglog_slope(std::span<const double> n, std::span<const double> value,
                          double burn_in = 0.25);

enum class Algorithm { kw, md };

struct RunConfig {
  Algorithm algorithm = Algorithm::kw;
  EstimatorConfig estimator;
  GainSchedule schedule;
  Averaging averaging = Averaging::uniform;
  std::uint64_t n_total = 100000;
  std::size_t reps = 400;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> checkpoints;
  double burn_in = 0.25;
  unsigned threads = 1;
  std::optional<double> theta0;
  /// Declared acceptance band for σ̂; an empty band never passes.
  double band_lo = -std::numeric_limits<double>::infinity();
  double band_hi = std::numeric_limits<double>::infinity();
  double sigma_theory = std::numeric_limits<double>::quiet_NaN();
};

struct RateReport {
  std::string descriptor;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> value;  ///< RMSE (KW) or mean objective gap (MD)
  std::vector<double> stderrs;
  SlopeFit fit;
  double sigma_hat = std::numeric_limits<double>::quiet_NaN();
  double sigma_theory = std::numeric_limits<double>::quiet_NaN();
  double band_lo = 0.0;
  double band_hi = 0.0;
  std::size_t aborted = 0;
  std::vector<std::string> abort_diagnostics;
  std::uint64_t clamp_events = 0;
  bool pass = false;
};

/// Runs `reps` trajectories (replication k uses StreamSet::derive(master_seed, k))
/// and reduces them in index order.
RateReport rmse_curve(const Problem& problem, const RunConfig& config);

struct Table1Options {
  std::uint64_t master_seed = 0;
  std::size_t reps = 400;
  std::uint64_t n_total = 100000;
  std::size_t variance_reps = 10000;
  unsigned checkpoints_per_decade = 20;
  unsigned threads = 1;
};

struct Table1Cell {
  std::string cell;
  std::string problem;
  Scheme scheme = Scheme::symmetric;
  Coupling coupling = Coupling::crn;
  Method method = Method::inversion;
  double sigma_hat = std::numeric_limits<double>::quiet_NaN();
  double sigma_theory = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  bool pass = false;
};

/// The rate matrix {inversion, rejection, composition} × {crn, ind} × {sym, one}
/// plus variance-level cells for inversion with a flat segment.
std::vector<Table1Cell> table1_suite(const Table1Options& options);

}  // namespace fdsa
