#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdsa/core.hpp"
#include "fdsa/gradest.hpp"
#include "fdsa/prng.hpp"
#include "fdsa/problems.hpp"

namespace fdsa {

/// a_n = a n^{-α}, δ_n = d n^{-η}.
struct GainSchedule {
  double a = 1.0;
  double alpha = 1.0;
  double d = 1.0;
  double eta = 0.5;

  double gain(std::uint64_t n) const { return a * std::pow(static_cast<double>(n), -alpha); }
  double delta(std::uint64_t n) const { return d * std::pow(static_cast<double>(n), -eta); }
  /// Throws ParameterError unless a, d > 0, α ∈ (0,1], η > 0.
  void validate() const;
};

/// Geometric grid from `first` to `last` (inclusive, deduplicated), `per_decade` points per decade.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t first, std::uint64_t last,
                                                 unsigned per_decade = 20);

/// Iterate snapshots at checkpoint n (the iterate after n updates).
struct Trajectory {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> theta;
  std::vector<double> sq_error;  ///< (θ − θ*)² when θ* is known
  std::vector<double> gap;       ///< J(θ̂) − J(θ*) for mirror-descent runs
  std::uint64_t clamp_events = 0;
  bool aborted = false;
  std::string diagnostic;
};

/// θ_{n+1} = clamp_Θ(θ_n − a_n h_n) with h_n = estimate_h(θ_n, δ_n). Before each
/// evaluation θ_n is clamped into the feasible interval for δ_n (counted).
Trajectory kw_run(const Problem& problem, const EstimatorConfig& config, const GainSchedule& schedule,
                  std::uint64_t n_total, StreamSet& streams,
                  const std::vector<std::uint64_t>& checkpoints,
                  std::optional<double> theta0 = std::nullopt);

/// θ_{n+1} = clamp_Θ(θ_n − a_n (J'(θ_n) + noise_sd · N(0,1))), normals by inversion of streams.crn.
Trajectory rm_run(const Problem& problem, const GainSchedule& schedule, std::uint64_t n_total,
                  StreamSet& streams, const std::vector<std::uint64_t>& checkpoints,
                  double noise_sd = 1.0, std::optional<double> theta0 = std::nullopt);

enum class Averaging { uniform, weighted };

struct MdConfig {
  Interval domain;
  double kappa = 0.5;
  double radius_r = 0.0;
  Averaging averaging = Averaging::uniform;

  /// Θ with r = √(2κ)·diameter, the smallest radius covering every pair.
  static MdConfig for_domain(Interval domain, Averaging averaging = Averaging::uniform);
  void validate() const;
};

struct MdState {
  double theta = 0.0;
  double avg_uniform = 0.0;
  double avg_weighted = 0.0;
  double weight_sum = 0.0;
  std::uint64_t n = 0;

  double averaged(Averaging mode) const {
    return mode == Averaging::uniform ? avg_uniform : avg_weighted;
  }
};

MdState md_start(double theta0);

/// Folds the current iterate into both averages (weight 1 and weight a_n) and
/// moves to the projection of θ − a_n h onto the domain.
MdState md_step(const MdState& state, double h, double a_n, const MdConfig& config);

/// Mirror descent with the squared-distance generator; records J(θ̂_n) − J(θ*).
Trajectory md_run(const Problem& problem, const EstimatorConfig& config, const MdConfig& md,
                  const GainSchedule& schedule, std::uint64_t n_total, StreamSet& streams,
                  const std::vector<std::uint64_t>& checkpoints,
                  std::optional<double> theta0 = std::nullopt);

struct SigmaPrediction {
  double sigma = 0.0;
  bool converges = false;
};

/// σ = ½ min{α + γη, 2βη}.
SigmaPrediction predict_sigma(double alpha, double eta, double beta, double gamma);

struct BestRate {
  double sigma = 0.0;
  double alpha = 1.0;
  double eta = 0.0;
};

/// σ* = β/(2β−γ) at α = 1, η = 1/(2β−γ).
BestRate best_rate_kw(double beta, double gamma);

struct MdBoundConstants {
  double r = 0.0;
  double kappa = 0.5;
  double K2 = 0.0;
  double b = 0.0;
  double c_var = 0.0;
  double beta = 2.0;
  double gamma = 0.0;
  /// Use E[h²] ≤ c̃ δ^γ: drops the K2 and b² terms, C2 = c̃/(2κ).
  bool second_moment = false;
  double c_tilde = 0.0;
};

/// C1/(n a_n) + (C2/n) Σ a_i δ_i^γ + (C3/n) Σ a_i + (C4/n) Σ a_i δ_i^{2β} + (C5/n) Σ δ_i^β,
/// with δ_i capped at `delta_cap`.
double eval_md_bound(const MdBoundConstants& k, const GainSchedule& schedule, std::uint64_t n,
                     double delta_cap = kInf);
/// Same bound at every checkpoint, computed with one pass of running sums.
std::vector<double> eval_md_bound_curve(const MdBoundConstants& k, const GainSchedule& schedule,
                                        const std::vector<std::uint64_t>& checkpoints,
                                        double delta_cap = kInf);

}  // namespace fdsa
