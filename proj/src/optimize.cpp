#include "fdsa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdsa/errors.hpp"
#include "fdsa/stats.hpp"

namespace fdsa {

namespace {

double initial_theta(const Problem& problem, std::optional<double> theta0) {
  const Interval dom = problem.theta_domain();
  const double t = theta0.value_or(dom.midpoint());
  if (!dom.contains(t)) throw DomainError(problem.name() + ": initial parameter outside the domain");
  return t;
}

std::vector<std::uint64_t> sorted_checkpoints(std::vector<std::uint64_t> cps) {
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

// Clamps θ into the interval where θ ± δ can still be evaluated.
double feasible_theta(const Problem& problem, double theta, double delta, Scheme scheme,
                      std::uint64_t& clamps) {
  const Interval f = problem.feasible_interval(delta, scheme);
  if (f.empty()) throw ConfigError(problem.name() + ": perturbation too large for the domain");
  const double c = f.clamp(theta);
  if (c != theta) ++clamps;
  return c;
}

void record(Trajectory& t, std::uint64_t n, double theta, const GroundTruth* truth) {
  t.checkpoints.push_back(n);
  t.theta.push_back(theta);
  if (truth && truth->theta_star) {
    const double e = theta - *truth->theta_star;
    t.sq_error.push_back(e * e);
  }
}

}  // namespace

void GainSchedule::validate() const {
  if (!(a > 0.0) || !(d > 0.0) || !(alpha > 0.0 && alpha <= 1.0) || !(eta > 0.0) ||
      !std::isfinite(a) || !std::isfinite(d) || !std::isfinite(eta)) {
    throw ParameterError("gain schedule needs a, d > 0, alpha in (0,1], eta > 0");
  }
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t first, std::uint64_t last,
                                                 unsigned per_decade) {
  if (first == 0 || last < first || per_decade == 0) {
    throw ParameterError("checkpoints need 1 <= first <= last and a positive density");
  }
  std::vector<std::uint64_t> out;
  const double ratio = std::pow(10.0, 1.0 / per_decade);
  for (double v = static_cast<double>(first); v <= static_cast<double>(last) * (1 + 1e-12); v *= ratio) {
    out.push_back(static_cast<std::uint64_t>(std::llround(v)));
  }
  out.push_back(last);
  return sorted_checkpoints(std::move(out));
}

Trajectory kw_run(const Problem& problem, const EstimatorConfig& config, const GainSchedule& schedule,
                  std::uint64_t n_total, StreamSet& streams,
                  const std::vector<std::uint64_t>& checkpoints, std::optional<double> theta0) {
  schedule.validate();
  config.validate(problem);
  if (n_total == 0) throw ParameterError("kw_run: n_total must be at least 1");
  const auto cps = sorted_checkpoints(checkpoints);
  const GroundTruth* truth = problem.ground_truth();
  const Interval dom = problem.theta_domain();

  Trajectory traj;
  double theta = initial_theta(problem, theta0);
  std::size_t next_cp = 0;
  while (next_cp < cps.size() && cps[next_cp] == 0) record(traj, cps[next_cp++], theta, truth);

  for (std::uint64_t n = 1; n <= n_total; ++n) {
    const double delta = std::min(schedule.delta(n), problem.max_delta());
    double h;
    try {
      theta = feasible_theta(problem, theta, delta, config.scheme, traj.clamp_events);
      h = estimate_h(problem, theta, delta, config, streams);
    } catch (const Error& e) {
      traj.aborted = true;
      traj.diagnostic = "iteration " + std::to_string(n) + ": " + e.what();
      return traj;
    }
    if (!std::isfinite(h)) {
      std::ostringstream msg;
      msg << "iteration " << n << ": non-finite gradient estimate at theta=" << theta
          << " delta=" << delta;
      traj.aborted = true;
      traj.diagnostic = msg.str();
      return traj;
    }
    const double next = theta - schedule.gain(n) * h;
    theta = dom.clamp(next);
    if (theta != next) ++traj.clamp_events;
    while (next_cp < cps.size() && cps[next_cp] == n) record(traj, cps[next_cp++], theta, truth);
  }
  return traj;
}

Trajectory rm_run(const Problem& problem, const GainSchedule& schedule, std::uint64_t n_total,
                  StreamSet& streams, const std::vector<std::uint64_t>& checkpoints,
                  double noise_sd, std::optional<double> theta0) {
  schedule.validate();
  const GroundTruth* truth = problem.ground_truth();
  if (!truth || !truth->dJ) throw UnsupportedFamily(problem.name() + ": no closed-form derivative");
  if (!(noise_sd >= 0.0)) throw ParameterError("rm_run: noise standard deviation must be >= 0");
  const auto cps = sorted_checkpoints(checkpoints);
  const Interval dom = problem.theta_domain();

  Trajectory traj;
  double theta = initial_theta(problem, theta0);
  std::size_t next_cp = 0;
  while (next_cp < cps.size() && cps[next_cp] == 0) record(traj, cps[next_cp++], theta, truth);
  for (std::uint64_t n = 1; n <= n_total; ++n) {
    double g = truth->dJ(theta);
    if (noise_sd > 0.0) {
      double u = streams.crn.next_uniform();
      while (u == 0.0) u = streams.crn.next_uniform();
      g += noise_sd * normal_quantile(u);
    }
    const double next = theta - schedule.gain(n) * g;
    theta = dom.clamp(next);
    if (theta != next) ++traj.clamp_events;
    while (next_cp < cps.size() && cps[next_cp] == n) record(traj, cps[next_cp++], theta, truth);
  }
  return traj;
}

MdConfig MdConfig::for_domain(Interval domain, Averaging averaging) {
  MdConfig c;
  c.domain = domain;
  c.kappa = 0.5;
  c.radius_r = std::sqrt(2.0 * c.kappa) * domain.width();
  c.averaging = averaging;
  return c;
}

void MdConfig::validate() const {
  if (!(domain.lo < domain.hi)) throw ParameterError("mirror descent domain needs lo < hi");
  if (!(kappa > 0.0)) throw ParameterError("mirror descent needs kappa > 0");
  // D(x,y) = ½(x−y)² is largest at the corner pair.
  const double worst = 0.5 * domain.width() * domain.width();
  if (worst > 0.5 * radius_r * radius_r * (1 + 1e-12)) {
    throw ParameterError("mirror descent radius r too small for the domain");
  }
}

MdState md_start(double theta0) {
  MdState s;
  s.theta = theta0;
  s.avg_uniform = theta0;
  s.avg_weighted = theta0;
  return s;
}

MdState md_step(const MdState& state, double h, double a_n, const MdConfig& config) {
  if (!(a_n > 0.0)) throw ParameterError("md_step: step size must be positive");
  MdState s = state;
  s.n += 1;
  s.avg_uniform += (state.theta - state.avg_uniform) / static_cast<double>(s.n);
  s.weight_sum += a_n;
  s.avg_weighted += (a_n / s.weight_sum) * (state.theta - state.avg_weighted);
  s.theta = config.domain.clamp(state.theta - a_n * h);
  return s;
}

Trajectory md_run(const Problem& problem, const EstimatorConfig& config, const MdConfig& md,
                  const GainSchedule& schedule, std::uint64_t n_total, StreamSet& streams,
                  const std::vector<std::uint64_t>& checkpoints, std::optional<double> theta0) {
  schedule.validate();
  md.validate();
  config.validate(problem);
  if (n_total == 0) throw ParameterError("md_run: n_total must be at least 1");
  const GroundTruth* truth = problem.ground_truth();
  if (!truth || !truth->J || !truth->theta_star) {
    throw UnsupportedFamily(problem.name() + ": mirror descent gap needs J and its minimizer");
  }
  const double j_star = truth->J(*truth->theta_star);
  const auto cps = sorted_checkpoints(checkpoints);

  Trajectory traj;
  MdState state = md_start(md.domain.clamp(initial_theta(problem, theta0)));
  std::size_t next_cp = 0;
  for (std::uint64_t n = 1; n <= n_total; ++n) {
    const double delta = std::min(schedule.delta(n), problem.max_delta());
    const double a_n = schedule.gain(n);
    double h;
    try {
      state.theta = feasible_theta(problem, state.theta, delta, config.scheme, traj.clamp_events);
      h = estimate_h(problem, state.theta, delta, config, streams);
    } catch (const Error& e) {
      traj.aborted = true;
      traj.diagnostic = "iteration " + std::to_string(n) + ": " + e.what();
      return traj;
    }
    if (!std::isfinite(h)) {
      traj.aborted = true;
      traj.diagnostic = "iteration " + std::to_string(n) + ": non-finite gradient estimate";
      return traj;
    }
    state = md_step(state, h, a_n, md);
    while (next_cp < cps.size() && cps[next_cp] == n) {
      const double avg = state.averaged(md.averaging);
      record(traj, cps[next_cp++], avg, truth);
      traj.gap.push_back(truth->J(avg) - j_star);
    }
  }
  return traj;
}

SigmaPrediction predict_sigma(double alpha, double eta, double beta, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(eta > 0.0)) {
    throw ParameterError("predict_sigma needs alpha in (0,1] and eta > 0");
  }
  SigmaPrediction p;
  p.sigma = 0.5 * std::min(alpha + gamma * eta, 2.0 * beta * eta);
  p.converges = p.sigma > 0.0;
  return p;
}

BestRate best_rate_kw(double beta, double gamma) {
  if (!(beta > 0.0) || !(gamma <= 0.0)) throw ParameterError("best_rate_kw needs beta > 0, gamma <= 0");
  const double denom = 2.0 * beta - gamma;
  return {beta / denom, 1.0, 1.0 / denom};
}

std::vector<double> eval_md_bound_curve(const MdBoundConstants& k, const GainSchedule& schedule,
                                        const std::vector<std::uint64_t>& checkpoints,
                                        double delta_cap) {
  if (!(k.kappa > 0.0)) throw ParameterError("md bound needs kappa > 0");
  const auto cps = sorted_checkpoints(checkpoints);
  if (!cps.empty() && cps.front() == 0) throw ParameterError("md bound needs n >= 1");

  const double c1 = k.r * k.r / 2.0;
  const double c2 = (k.second_moment ? k.c_tilde : k.c_var) / (2.0 * k.kappa);
  const double c3 = k.second_moment ? 0.0 : k.K2 * k.K2 * k.r * k.r / (2.0 * k.kappa * k.kappa);
  const double c4 = k.second_moment ? 0.0 : k.b * k.b / k.kappa;
  const double c5 = k.b * k.r / std::sqrt(2.0 * k.kappa);

  double s_var = 0.0, s_gain = 0.0, s_bias2 = 0.0, s_bias = 0.0;
  std::vector<double> out;
  out.reserve(cps.size());
  std::uint64_t i = 0;
  for (std::uint64_t n : cps) {
    for (; i < n; ) {
      ++i;
      const double a = schedule.gain(i);
      const double d = std::min(schedule.delta(i), delta_cap);
      s_var += a * std::pow(d, k.gamma);
      s_gain += a;
      s_bias2 += a * std::pow(d, 2.0 * k.beta);
      s_bias += std::pow(d, k.beta);
    }
    const double nn = static_cast<double>(n);
    out.push_back(c1 / (nn * schedule.gain(n)) + c2 * s_var / nn + c3 * s_gain / nn +
                  c4 * s_bias2 / nn + c5 * s_bias / nn);
  }
  return out;
}

double eval_md_bound(const MdBoundConstants& k, const GainSchedule& schedule, std::uint64_t n,
                     double delta_cap) {
  return eval_md_bound_curve(k, schedule, {n}, delta_cap).front();
}

}  // namespace fdsa
