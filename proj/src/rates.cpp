#include "fdsa/rates.hpp"

#include <cmath>
#include <sstream>

#include "fdsa/errors.hpp"
#include "fdsa/parallel.hpp"
#include "fdsa/stats.hpp"

namespace fdsa {

SlopeFit fit_loglog_slope(std::span<const double> n, std::span<const double> value, double burn_in) {
  if (n.size() != value.size()) throw FitError("fit_loglog_slope: size mismatch");
  if (n.empty()) throw FitError("fit_loglog_slope: no points");
  if (!(burn_in >= 0.0 && burn_in < 1.0)) throw FitError("fit_loglog_slope: burn-in outside [0,1)");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(value[i] > 0.0)) {
      throw FitError("fit_loglog_slope: nonpositive value at point " + std::to_string(i));
    }
  }

  double log_lo = std::log(n[0]), log_hi = std::log(n[0]);
  for (double v : n) {
    log_lo = std::min(log_lo, std::log(v));
    log_hi = std::max(log_hi, std::log(v));
  }
  const double cut = log_lo + burn_in * (log_hi - log_lo);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]);
    if (x >= cut - 1e-12) {
      xs.push_back(x);
      ys.push_back(std::log(value[i]));
    }
  }
  if (xs.size() < 8) throw FitError("fit_loglog_slope: fewer than 8 points after burn-in");

  const LinearFit lf = ordinary_least_squares(xs, ys);
  SlopeFit fit;
  fit.slope = -lf.slope;
  fit.slope_stderr = lf.slope_stderr;
  fit.r_squared = lf.r_squared;
  fit.intercept = lf.intercept;
  fit.points = lf.points;
  return fit;
}

RateReport rmse_curve(const Problem& problem, const RunConfig& config) {
  if (config.reps < 50) throw ParameterError("rmse_curve: at least 50 replications required");
  if (config.checkpoints.empty()) throw ParameterError("rmse_curve: empty checkpoint list");
  config.schedule.validate();
  config.estimator.validate(problem);
  const GroundTruth* truth = problem.ground_truth();
  if (!truth || !truth->theta_star) {
    throw UnsupportedFamily(problem.name() + ": rate curves need a known minimizer");
  }
  if (config.algorithm == Algorithm::md && !truth->J) {
    throw UnsupportedFamily(problem.name() + ": mirror-descent gaps need a closed-form J");
  }

  std::vector<Trajectory> runs(config.reps);
  const MdConfig md = MdConfig::for_domain(problem.theta_domain(), config.averaging);
  parallel_for(config.reps, config.threads, [&](std::size_t k) {
    StreamSet streams = StreamSet::derive(config.master_seed, k);
    if (config.algorithm == Algorithm::kw) {
      runs[k] = kw_run(problem, config.estimator, config.schedule, config.n_total, streams,
                       config.checkpoints, config.theta0);
    } else {
      runs[k] = md_run(problem, config.estimator, md, config.schedule, config.n_total, streams,
                       config.checkpoints, config.theta0);
    }
  });

  RateReport report;
  std::ostringstream desc;
  desc << problem.name() << " " << (config.algorithm == Algorithm::kw ? "kw" : "md") << " "
       << to_string(config.estimator.scheme) << "/" << to_string(config.estimator.coupling) << "/"
       << to_string(config.estimator.method) << " a=" << config.schedule.a
       << " alpha=" << config.schedule.alpha << " d=" << config.schedule.d
       << " eta=" << config.schedule.eta;
  report.descriptor = desc.str();
  report.sigma_theory = config.sigma_theory;
  report.band_lo = config.band_lo;
  report.band_hi = config.band_hi;

  std::vector<const Trajectory*> done;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    report.clamp_events += runs[k].clamp_events;
    if (runs[k].aborted) {
      ++report.aborted;
      report.abort_diagnostics.push_back("rep " + std::to_string(k) + ": " + runs[k].diagnostic);
    } else {
      done.push_back(&runs[k]);
    }
  }
  if (done.empty()) return report;

  report.checkpoints = done.front()->checkpoints;
  for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
    MomentAccumulator acc;
    for (const Trajectory* t : done) {
      acc.add(config.algorithm == Algorithm::kw ? t->sq_error[c] : t->gap[c]);
    }
    if (config.algorithm == Algorithm::kw) {
      const double rmse = std::sqrt(acc.mean());
      report.value.push_back(rmse);
      // Delta method: sd(√m̂) ≈ sd(m̂) / (2√m).
      report.stderrs.push_back(rmse > 0.0 ? acc.mean_stderr() / (2.0 * rmse) : 0.0);
    } else {
      report.value.push_back(acc.mean());
      report.stderrs.push_back(acc.mean_stderr());
    }
  }

  std::vector<double> ns(report.checkpoints.begin(), report.checkpoints.end());
  try {
    report.fit = fit_loglog_slope(ns, report.value, config.burn_in);
    report.sigma_hat = report.fit.slope;
  } catch (const FitError& e) {
    report.abort_diagnostics.push_back(std::string("fit: ") + e.what());
    return report;
  }
  const bool few_aborts = static_cast<double>(report.aborted) <= 0.01 * static_cast<double>(config.reps);
  report.pass = few_aborts && report.sigma_hat >= config.band_lo && report.sigma_hat <= config.band_hi;
  return report;
}

namespace {

struct CellSpec {
  std::string cell;
  std::string problem;
  Scheme scheme;
  Coupling coupling;
  Method method;
  double a;
  double eta;
  double sigma_theory;
  double band_lo;
  double band_hi;
};

constexpr double kDefaultHalfBand = 0.08;

CellSpec rate_cell(std::string cell, std::string problem, Scheme s, Coupling c, Method m, double a,
                   double eta, double theory, double lo = -1.0, double hi = -1.0) {
  if (lo < 0.0) {
    lo = theory - kDefaultHalfBand;
    hi = theory + kDefaultHalfBand;
  }
  return {std::move(cell), std::move(problem), s, c, m, a, eta, theory, lo, hi};
}

}  // namespace

std::vector<Table1Cell> table1_suite(const Table1Options& options) {
  using S = Scheme;
  using C = Coupling;
  using M = Method;
  constexpr double kTriA = 6.0;
  constexpr double kMixA = 0.5;

  const std::vector<CellSpec> cells = {
      rate_cell("inversion_m1zero_crn_sym", "triangular", S::symmetric, C::crn, M::inversion, kTriA, 0.5, 0.5, 0.42, 0.58),
      rate_cell("inversion_m1zero_crn_one", "triangular", S::one_sided, C::crn, M::inversion, kTriA, 0.5, 0.5),
      rate_cell("inversion_m1zero_ind_sym", "triangular", S::symmetric, C::independent, M::inversion, kTriA, 1.0 / 6, 1.0 / 3, 0.25, 0.41),
      rate_cell("inversion_m1zero_ind_one", "triangular", S::one_sided, C::independent, M::inversion, kTriA, 0.25, 0.25, 0.16, 0.34),
      rate_cell("rejection_crn_sym", "triangular", S::symmetric, C::crn, M::rejection, kTriA, 0.2, 0.4, 0.31, 0.49),
      rate_cell("rejection_crn_one", "triangular", S::one_sided, C::crn, M::rejection, kTriA, 1.0 / 3, 1.0 / 3),
      rate_cell("rejection_ind_sym", "triangular", S::symmetric, C::independent, M::rejection, kTriA, 1.0 / 6, 1.0 / 3),
      rate_cell("rejection_ind_one", "triangular", S::one_sided, C::independent, M::rejection, kTriA, 0.25, 0.25),
      rate_cell("composition2_crn_sym", "mixture3", S::symmetric, C::crn, M::composition_two_uniform, kMixA, 0.2, 0.4, 0.31, 0.49),
      rate_cell("compositiond_crn_sym", "mixture3", S::symmetric, C::crn, M::composition_derived, kMixA, 0.2, 0.4, 0.31, 0.49),
      rate_cell("composition2_crn_one", "mixture3", S::one_sided, C::crn, M::composition_two_uniform, kMixA, 1.0 / 3, 1.0 / 3),
      rate_cell("composition2_ind_sym", "mixture3", S::symmetric, C::independent, M::composition_two_uniform, kMixA, 1.0 / 6, 1.0 / 3),
      rate_cell("composition2_ind_one", "mixture3", S::one_sided, C::independent, M::composition_two_uniform, kMixA, 0.25, 0.25),
  };

  std::vector<Table1Cell> out;
  const auto checkpoints = geometric_checkpoints(
      std::max<std::uint64_t>(1, options.n_total / 100), options.n_total, options.checkpoints_per_decade);

  std::uint64_t index = 0;
  for (const CellSpec& spec : cells) {
    const ProblemPtr problem = make_problem(spec.problem);
    RunConfig rc;
    rc.estimator = {spec.scheme, spec.coupling, spec.method};
    rc.schedule = {spec.a, 1.0, 1.0, spec.eta};
    rc.n_total = options.n_total;
    rc.reps = options.reps;
    rc.master_seed = mix64(options.master_seed + index++);
    rc.checkpoints = checkpoints;
    rc.threads = options.threads;
    rc.sigma_theory = spec.sigma_theory;
    rc.band_lo = spec.band_lo;
    rc.band_hi = spec.band_hi;
    const RateReport r = rmse_curve(*problem, rc);
    out.push_back({spec.cell, spec.problem, spec.scheme, spec.coupling, spec.method, r.sigma_hat,
                   spec.sigma_theory, spec.band_lo, spec.band_hi, r.pass});
  }

  // Inversion with a flat segment: the rate follows from the measured variance
  // exponent through σ* = β/(2β − γ̂).
  const ProblemPtr flat = make_problem("atomflat");
  for (Scheme scheme : {Scheme::symmetric, Scheme::one_sided}) {
    const double beta = scheme == Scheme::symmetric ? 2.0 : 1.0;
    const EstimatorConfig cfg{scheme, Coupling::crn, Method::inversion};
    const VarianceProbe vp = variance_probe(*flat, 0.5, default_delta_grid(), options.variance_reps,
                                            cfg, mix64(options.master_seed + index++), options.threads);
    Table1Cell c;
    c.cell = scheme == Scheme::symmetric ? "inversion_m1pos_crn_sym" : "inversion_m1pos_crn_one";
    c.problem = "atomflat";
    c.scheme = scheme;
    c.coupling = Coupling::crn;
    c.method = Method::inversion;
    c.sigma_theory = beta / (2.0 * beta + 1.0);
    c.band_lo = beta / (2.0 * beta + 1.25);
    c.band_hi = beta / (2.0 * beta + 0.75);
    if (std::isfinite(vp.gamma_hat) && vp.gamma_hat < 2.0 * beta) {
      c.sigma_hat = beta / (2.0 * beta - vp.gamma_hat);
      c.pass = c.sigma_hat >= c.band_lo && c.sigma_hat <= c.band_hi;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace fdsa
