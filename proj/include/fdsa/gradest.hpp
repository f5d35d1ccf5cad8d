#pragma once

#include <cstdint>
#include <vector>

#include "fdsa/core.hpp"
#include "fdsa/prng.hpp"
#include "fdsa/problems.hpp"
#include "fdsa/stats.hpp"

namespace fdsa {

struct EstimatorConfig {
  Scheme scheme = Scheme::symmetric;
  Coupling coupling = Coupling::crn;
  Method method = Method::inversion;

  /// Throws UnsupportedFamily when the problem cannot generate with `method`.
  void validate(const Problem& problem) const;
};

/// Bias/variance exponents and scales of an estimator: E[h] = J' + O(δ^β), Var[h] = O(δ^γ).
struct EstimatorContract {
  double beta = 2.0;
  double gamma = 0.0;
  double bias_scale = 0.0;
  double variance_scale = 0.0;
};

/// The (β, γ) pair the theory assigns to a configuration, given the variance
/// regime of the CRN coupling (γ = 0 for smooth inversion, −1 for flats,
/// rejection and composition).
EstimatorContract nominal_contract(const EstimatorConfig& config, double crn_gamma);

/// Finite-difference estimate of J'(θ).
///
/// symmetric: [L(θ+δ) − L(θ−δ)] / (2δ); one-sided: [L(θ+δ) − L(θ)] / δ.
/// crn draws both measurements from streams.crn (and streams.retry);
/// independent draws them from streams.independent_plus / independent_minus.
double estimate_h(const Problem& problem, double theta, double delta, const EstimatorConfig& config,
                  StreamSet& streams);

/// δ_k = 2^{-3}, ..., 2^{-10}.
std::vector<double> default_delta_grid();

struct VarianceProbe {
  std::vector<double> deltas;
  std::vector<double> variances;
  std::vector<double> stderrs;
  LinearFit fit;  ///< log Var against log δ
  double gamma_hat = 0.0;
};

/// Replication k at every δ uses StreamSet::derive(seed, k), so the grid
/// shares randomness across δ.
VarianceProbe variance_probe(const Problem& problem, double theta, const std::vector<double>& deltas,
                             std::size_t reps, const EstimatorConfig& config, std::uint64_t seed,
                             unsigned threads = 1);

enum class BiasProtocol {
  /// mean[h(δ)] − J'(θ)
  direct,
  /// mean[h(δ) − h(δ_ref)] on replayed streams, δ_ref = min grid δ / 1024;
  /// cancels the O(1) noise of h and leaves bias(δ) − bias(δ_ref).
  reference,
};

struct BiasProbe {
  std::vector<double> deltas;
  std::vector<double> biases;
  std::vector<double> stderrs;
  LinearFit fit;  ///< log |bias| against log δ
  double beta_hat = 0.0;
  bool below_noise_floor = false;
};

BiasProbe bias_probe(const Problem& problem, double theta, const std::vector<double>& deltas,
                     std::size_t reps, const EstimatorConfig& config, std::uint64_t seed,
                     BiasProtocol protocol = BiasProtocol::reference, unsigned threads = 1);

}  // namespace fdsa
