#include "fdsa/gradest.hpp"

#include <cmath>
#include <limits>

#include "fdsa/errors.hpp"
#include "fdsa/parallel.hpp"

namespace fdsa {

namespace {

std::vector<double> log_of(const std::vector<double>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(std::log(x));
  return out;
}

}  // namespace

void EstimatorConfig::validate(const Problem& problem) const {
  if (!problem.supports(method)) {
    throw UnsupportedFamily(problem.name() + ": generation method '" +
                            std::string(to_string(method)) + "' is not available");
  }
}

EstimatorContract nominal_contract(const EstimatorConfig& config, double crn_gamma) {
  EstimatorContract c;
  c.beta = config.scheme == Scheme::symmetric ? 2.0 : 1.0;
  c.gamma = config.coupling == Coupling::independent ? -2.0 : crn_gamma;
  return c;
}

double estimate_h(const Problem& problem, double theta, double delta, const EstimatorConfig& config,
                  StreamSet& streams) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("estimate_h: delta must be positive");
  const double lo = config.scheme == Scheme::symmetric ? theta - delta : theta;
  const double hi = theta + delta;
  const double width = config.scheme == Scheme::symmetric ? 2.0 * delta : delta;
  const Interval eval = problem.evaluation_domain();
  if (!eval.contains(lo) || !eval.contains(hi)) {
    throw DomainError(problem.name() + ": finite-difference points leave the evaluation domain");
  }

  if (config.coupling == Coupling::crn) {
    const auto [l_lo, l_hi] = problem.measure_common(lo, hi, config.method, streams.crn, streams.retry);
    return (l_hi - l_lo) / width;
  }
  const double l_hi = problem.measure(hi, config.method, streams.independent_plus);
  const double l_lo = problem.measure(lo, config.method, streams.independent_minus);
  return (l_hi - l_lo) / width;
}

std::vector<double> default_delta_grid() {
  std::vector<double> g;
  for (int k = 3; k <= 10; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

VarianceProbe variance_probe(const Problem& problem, double theta, const std::vector<double>& deltas,
                             std::size_t reps, const EstimatorConfig& config, std::uint64_t seed,
                             unsigned threads) {
  if (reps < 1000) throw ParameterError("variance_probe: at least 1000 replications required");
  if (deltas.size() < 2) throw ParameterError("variance_probe: need at least two deltas");
  config.validate(problem);

  const std::size_t m = deltas.size();
  std::vector<double> h(m * reps);
  parallel_for(reps, threads, [&](std::size_t k) {
    const StreamSet base = StreamSet::derive(seed, k);
    for (std::size_t j = 0; j < m; ++j) {
      StreamSet s = base;
      h[j * reps + k] = estimate_h(problem, theta, deltas[j], config, s);
    }
  });

  VarianceProbe out;
  out.deltas = deltas;
  for (std::size_t j = 0; j < m; ++j) {
    MomentAccumulator acc;
    for (std::size_t k = 0; k < reps; ++k) acc.add(h[j * reps + k]);
    out.variances.push_back(acc.variance());
    out.stderrs.push_back(acc.variance_stderr());
  }
  for (double v : out.variances) {
    if (!(v > 0.0)) {
      out.gamma_hat = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
  }
  out.fit = ordinary_least_squares(log_of(out.deltas), log_of(out.variances));
  out.gamma_hat = out.fit.slope;
  return out;
}

BiasProbe bias_probe(const Problem& problem, double theta, const std::vector<double>& deltas,
                     std::size_t reps, const EstimatorConfig& config, std::uint64_t seed,
                     BiasProtocol protocol, unsigned threads) {
  if (reps < 2) throw ParameterError("bias_probe: at least two replications required");
  if (deltas.empty()) throw ParameterError("bias_probe: empty delta grid");
  config.validate(problem);
  const GroundTruth* truth = problem.ground_truth();
  if (protocol == BiasProtocol::direct && (!truth || !truth->dJ)) {
    throw UnsupportedFamily(problem.name() + ": direct bias probe needs a closed-form derivative");
  }

  double delta_min = deltas.front();
  for (double d : deltas) delta_min = std::min(delta_min, d);
  const double delta_ref = delta_min / 1024.0;
  const double target = protocol == BiasProtocol::direct ? truth->dJ(theta) : 0.0;

  const std::size_t m = deltas.size();
  std::vector<double> diff(m * reps);
  parallel_for(reps, threads, [&](std::size_t k) {
    const StreamSet base = StreamSet::derive(seed, k);
    double ref = target;
    if (protocol == BiasProtocol::reference) {
      StreamSet s = base;
      ref = estimate_h(problem, theta, delta_ref, config, s);
    }
    for (std::size_t j = 0; j < m; ++j) {
      StreamSet s = base;
      diff[j * reps + k] = estimate_h(problem, theta, deltas[j], config, s) - ref;
    }
  });

  BiasProbe out;
  out.deltas = deltas;
  bool all_below = true;
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < m; ++j) {
    MomentAccumulator acc;
    for (std::size_t k = 0; k < reps; ++k) acc.add(diff[j * reps + k]);
    out.biases.push_back(acc.mean());
    out.stderrs.push_back(acc.mean_stderr());
    if (std::abs(acc.mean()) >= 3.0 * acc.mean_stderr()) all_below = false;
    if (acc.mean() != 0.0) {
      xs.push_back(std::log(deltas[j]));
      ys.push_back(std::log(std::abs(acc.mean())));
    }
  }
  out.below_noise_floor = all_below;
  out.beta_hat = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() >= 2) {
    try {
      out.fit = ordinary_least_squares(xs, ys);
      out.beta_hat = out.fit.slope;
    } catch (const FitError&) {
    }
  }
  return out;
}

}  // namespace fdsa
