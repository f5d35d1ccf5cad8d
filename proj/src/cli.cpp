#include "fdsa/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "fdsa/errors.hpp"
#include "fdsa/optimize.hpp"
#include "fdsa/parallel.hpp"
#include "fdsa/problems.hpp"
#include "fdsa/stats.hpp"

namespace fdsa::cli {

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::map<std::string, Scheme> kSchemes{{"sym", Scheme::symmetric}, {"one", Scheme::one_sided}};
const std::map<std::string, Coupling> kCouplings{{"crn", Coupling::crn}, {"ind", Coupling::independent}};
const std::map<std::string, Method> kMethods{{"inv", Method::inversion},
                                             {"rej", Method::rejection},
                                             {"comp2", Method::composition_two_uniform},
                                             {"compd", Method::composition_derived}};

template <class T>
T lookup(const std::map<std::string, T>& table, const std::string& key, const char* what) {
  const auto it = table.find(key);
  if (it == table.end()) throw UsageError(std::string("invalid ") + what + " '" + key + "'");
  return it->second;
}

std::uint64_t parse_seed(const std::string& text, const char* origin) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(std::string("invalid seed from ") + origin + ": '" + text + "'");
  }
  return v;
}

// Raw option values as typed by the user; validated into ExperimentSpec.
struct RawOptions {
  std::string problem;
  std::string algo = "kw";
  std::string scheme = "sym";
  std::string coupling = "crn";
  std::string method = "inv";
  double a = 1.0, alpha = 1.0, d = 1.0, eta = 0.5;
  double n = 100000;
  double reps = -1;
  std::string seed;
  std::string out;
  double cpd = 20;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double theta0 = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double band_lo = -kInf, band_hi = kInf;
  double burn_in = 0.25;
  double delta = 0.05;
  double customers = 100;
  double variance_reps = 10000;
  std::string protocol = "reference";
  std::string averaging = "uniform";
  double noise_sd = 1.0;
  bool best = false;
};

std::uint64_t as_count(double v, const char* what, double min_value) {
  if (!std::isfinite(v) || v < min_value || v != std::floor(v) || v > 1e15) {
    std::ostringstream msg;
    msg << what << " must be an integer >= " << min_value;
    throw UsageError(msg.str());
  }
  return static_cast<std::uint64_t>(v);
}

ExperimentSpec validate(const std::string& sub, const RawOptions& raw, unsigned threads,
                        std::size_t default_reps) {
  ExperimentSpec spec;
  spec.subcommand = sub;
  spec.problem = raw.problem;
  spec.algo = raw.algo;
  spec.scheme = lookup(kSchemes, raw.scheme, "scheme");
  spec.coupling = lookup(kCouplings, raw.coupling, "coupling");
  spec.method = lookup(kMethods, raw.method, "method");
  spec.schedule = {raw.a, raw.alpha, raw.d, raw.eta};
  try {
    spec.schedule.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  spec.n = as_count(raw.n, "--n", 1);
  spec.reps = static_cast<std::size_t>(raw.reps < 0 ? default_reps : as_count(raw.reps, "--reps", 1));
  spec.checkpoints_per_decade = static_cast<unsigned>(as_count(raw.cpd, "--checkpoints-per-decade", 1));
  spec.threads = threads;
  spec.out = raw.out;
  if (!raw.seed.empty()) {
    spec.seed = parse_seed(raw.seed, "--seed");
  } else if (const char* env = std::getenv("SA_CRN_SEED"); env && *env) {
    spec.seed = parse_seed(env, "SA_CRN_SEED");
  }
  if (!spec.problem.empty()) {
    const auto names = problem_names();
    if (std::find(names.begin(), names.end(), spec.problem) == names.end()) {
      throw UsageError("unknown problem '" + spec.problem + "'");
    }
  }
  return spec;
}

void require_problem(const ExperimentSpec& spec) {
  if (spec.problem.empty()) throw UsageError(spec.subcommand + ": --problem is required");
}

double default_theta(const Problem& p, double requested) {
  if (std::isfinite(requested)) return requested;
  const GroundTruth* t = p.ground_truth();
  if (t && t->theta_star) return *t->theta_star;
  return p.theta_domain().midpoint();
}

// Writes to a temporary buffer first so that a failing computation leaves no file.
void write_output(const std::string& path, const std::string& body) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  f << body;
  f.close();
  if (!f) throw std::ios_base::failure("failed writing '" + path + "'");
}

bool in_band(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

int cmd_predict(const RawOptions& raw, std::ostream& out) {
  if (!std::isfinite(raw.beta) || !std::isfinite(raw.gamma)) {
    throw UsageError("predict: --beta and --gamma are required");
  }
  if (raw.best) {
    BestRate b;
    try {
      b = best_rate_kw(raw.beta, raw.gamma);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    out << "σ*=" << format_short(b.sigma) << " α*=" << format_short(b.alpha)
        << " η*=" << format_short(b.eta) << "\n";
    return 0;
  }
  SigmaPrediction p;
  try {
    p = predict_sigma(raw.alpha, raw.eta, raw.beta, raw.gamma);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  out << "σ=" << format_short(p.sigma) << "\n";
  out << "converges=" << (p.converges ? "yes" : "no") << "\n";
  return 0;
}

int cmd_variance(const ExperimentSpec& spec, const RawOptions& raw, std::ostream& out) {
  require_problem(spec);
  const ProblemPtr problem = make_problem(spec.problem);
  const EstimatorConfig cfg{spec.scheme, spec.coupling, spec.method};
  const double theta = default_theta(*problem, raw.theta);
  const VarianceProbe vp =
      variance_probe(*problem, theta, default_delta_grid(), spec.reps, cfg, spec.seed, spec.threads);
  std::ostringstream csv;
  write_variance_csv(csv, vp);
  write_output(spec.out, csv.str());
  const bool pass = in_band(vp.gamma_hat, raw.band_lo, raw.band_hi);
  out << "gamma_hat=" << format_double(vp.gamma_hat) << " stderr=" << format_double(vp.fit.slope_stderr)
      << " r2=" << format_double(vp.fit.r_squared) << " verdict=" << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : kExitFail;
}

int cmd_bias(const ExperimentSpec& spec, const RawOptions& raw, std::ostream& out) {
  require_problem(spec);
  const ProblemPtr problem = make_problem(spec.problem);
  const EstimatorConfig cfg{spec.scheme, spec.coupling, spec.method};
  const double theta = default_theta(*problem, raw.theta);
  BiasProtocol protocol;
  if (raw.protocol == "reference") {
    protocol = BiasProtocol::reference;
  } else if (raw.protocol == "direct") {
    protocol = BiasProtocol::direct;
  } else {
    throw UsageError("invalid protocol '" + raw.protocol + "'");
  }
  const BiasProbe bp = bias_probe(*problem, theta, default_delta_grid(), spec.reps, cfg, spec.seed,
                                  protocol, spec.threads);
  std::ostringstream csv;
  write_bias_csv(csv, bp);
  write_output(spec.out, csv.str());
  const bool pass = in_band(bp.beta_hat, raw.band_lo, raw.band_hi) ||
                    (std::isinf(raw.band_lo) && std::isinf(raw.band_hi));
  out << "beta_hat=" << format_double(bp.beta_hat) << " stderr=" << format_double(bp.fit.slope_stderr)
      << " below_noise_floor=" << (bp.below_noise_floor ? "yes" : "no")
      << " verdict=" << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : kExitFail;
}

int cmd_optimize(const ExperimentSpec& spec, const RawOptions& raw, std::ostream& out) {
  require_problem(spec);
  const ProblemPtr problem = make_problem(spec.problem);
  const EstimatorConfig cfg{spec.scheme, spec.coupling, spec.method};
  const auto cps = geometric_checkpoints(1, spec.n, spec.checkpoints_per_decade);
  StreamSet streams = StreamSet::derive(spec.seed, 0);
  std::optional<double> theta0;
  if (std::isfinite(raw.theta0)) theta0 = raw.theta0;

  Trajectory t;
  if (spec.algo == "kw") {
    t = kw_run(*problem, cfg, spec.schedule, spec.n, streams, cps, theta0);
  } else if (spec.algo == "rm") {
    t = rm_run(*problem, spec.schedule, spec.n, streams, cps, raw.noise_sd, theta0);
  } else if (spec.algo == "md") {
    const Averaging avg = raw.averaging == "weighted" ? Averaging::weighted : Averaging::uniform;
    t = md_run(*problem, cfg, MdConfig::for_domain(problem->theta_domain(), avg), spec.schedule,
               spec.n, streams, cps, theta0);
  } else {
    throw UsageError("invalid algorithm '" + spec.algo + "'");
  }

  std::ostringstream csv;
  csv << "n,theta";
  if (!t.sq_error.empty()) csv << ",sq_error";
  if (!t.gap.empty()) csv << ",gap";
  csv << "\n";
  for (std::size_t i = 0; i < t.checkpoints.size(); ++i) {
    csv << t.checkpoints[i] << "," << format_double(t.theta[i]);
    if (!t.sq_error.empty()) csv << "," << format_double(t.sq_error[i]);
    if (!t.gap.empty()) csv << "," << format_double(t.gap[i]);
    csv << "\n";
  }
  write_output(spec.out, csv.str());
  out << "theta_final=" << (t.theta.empty() ? std::string("nan") : format_double(t.theta.back()))
      << " clamps=" << t.clamp_events << (t.aborted ? " aborted: " + t.diagnostic : std::string())
      << "\n";
  return t.aborted ? kExitFail : 0;
}

int cmd_rates(const ExperimentSpec& spec, const RawOptions& raw, std::ostream& out) {
  require_problem(spec);
  const ProblemPtr problem = make_problem(spec.problem);
  RunConfig rc;
  if (spec.algo == "kw") {
    rc.algorithm = Algorithm::kw;
  } else if (spec.algo == "md") {
    rc.algorithm = Algorithm::md;
  } else {
    throw UsageError("rates: --algo must be kw or md");
  }
  if (spec.reps < 50) throw UsageError("rates: --reps must be at least 50");
  rc.estimator = {spec.scheme, spec.coupling, spec.method};
  rc.schedule = spec.schedule;
  rc.averaging = raw.averaging == "weighted" ? Averaging::weighted : Averaging::uniform;
  rc.n_total = spec.n;
  rc.reps = spec.reps;
  rc.master_seed = spec.seed;
  rc.checkpoints = geometric_checkpoints(std::max<std::uint64_t>(1, spec.n / 100), spec.n,
                                         spec.checkpoints_per_decade);
  rc.burn_in = raw.burn_in;
  rc.threads = spec.threads;
  rc.band_lo = raw.band_lo;
  rc.band_hi = raw.band_hi;
  const RateReport r = rmse_curve(*problem, rc);
  std::ostringstream csv;
  write_rates_csv(csv, r);
  write_output(spec.out, csv.str());
  out << r.descriptor << "\n"
      << "sigma_hat=" << format_double(r.sigma_hat) << " stderr=" << format_double(r.fit.slope_stderr)
      << " r2=" << format_double(r.fit.r_squared) << " aborted=" << r.aborted
      << " verdict=" << (r.pass ? "PASS" : "FAIL") << "\n";
  return r.pass ? 0 : kExitFail;
}

int cmd_table1(const ExperimentSpec& spec, const RawOptions& raw, std::ostream& out) {
  Table1Options opt;
  opt.master_seed = spec.seed;
  opt.reps = spec.reps;
  opt.n_total = spec.n;
  opt.variance_reps = static_cast<std::size_t>(as_count(raw.variance_reps, "--variance-reps", 1000));
  opt.checkpoints_per_decade = spec.checkpoints_per_decade;
  opt.threads = spec.threads;
  if (opt.reps < 50) throw UsageError("table1: --reps must be at least 50");
  const auto cells = table1_suite(opt);
  std::ostringstream csv;
  write_table1_csv(csv, cells);
  write_output(spec.out, csv.str());
  bool all = true;
  out << std::left << std::setw(26) << "cell" << std::setw(12) << "sigma_hat" << std::setw(10)
      << "theory" << "band          verdict\n";
  for (const auto& c : cells) {
    all = all && c.pass;
    std::ostringstream band;
    band << "[" << std::fixed << std::setprecision(3) << c.band_lo << "," << c.band_hi << "]";
    std::ostringstream sh, th;
    sh << std::fixed << std::setprecision(4) << c.sigma_hat;
    th << std::fixed << std::setprecision(4) << c.sigma_theory;
    out << std::left << std::setw(26) << c.cell << std::setw(12) << sh.str() << std::setw(10)
        << th.str() << std::setw(14) << band.str() << (c.pass ? "PASS" : "FAIL") << "\n";
  }
  return all ? 0 : kExitFail;
}

int cmd_queue(const ExperimentSpec& spec, const RawOptions& raw, std::ostream& out) {
  QueueSpec qs = default_queue_spec();
  qs.customers = static_cast<std::size_t>(as_count(raw.customers, "--customers", 1));
  const QueueProblem problem(qs);
  const double theta = std::isfinite(raw.theta) ? raw.theta : *qs.theta_star;
  if (!problem.theta_domain().contains(theta)) throw UsageError("queue: --theta outside [0.3, 0.9]");
  if (!(raw.delta > 0.0)) throw UsageError("queue: --delta must be positive");
  const EstimatorConfig crn{Scheme::symmetric, Coupling::crn, Method::inversion};
  const EstimatorConfig ind{Scheme::symmetric, Coupling::independent, Method::inversion};

  std::vector<double> level(spec.reps), h_crn(spec.reps), h_ind(spec.reps);
  parallel_for(spec.reps, spec.threads, [&](std::size_t k) {
    StreamSet s = StreamSet::derive(spec.seed, k);
    UniformStream lvl = s.crn;
    level[k] = lindley_avg_system_time(problem.model(), theta, lvl);
    StreamSet a = s;
    h_crn[k] = estimate_h(problem, theta, raw.delta, crn, a);
    StreamSet b = s;
    h_ind[k] = estimate_h(problem, theta, raw.delta, ind, b);
  });
  MomentAccumulator m_level, m_crn, m_ind;
  for (std::size_t k = 0; k < spec.reps; ++k) {
    m_level.add(level[k]);
    m_crn.add(h_crn[k]);
    m_ind.add(h_ind[k]);
  }
  std::ostringstream csv;
  csv << "quantity,mean,stderr,variance\n"
      << "avg_system_time," << format_double(m_level.mean()) << "," << format_double(m_level.mean_stderr())
      << "," << format_double(m_level.variance()) << "\n"
      << "h_crn," << format_double(m_crn.mean()) << "," << format_double(m_crn.mean_stderr()) << ","
      << format_double(m_crn.variance()) << "\n"
      << "h_ind," << format_double(m_ind.mean()) << "," << format_double(m_ind.mean_stderr()) << ","
      << format_double(m_ind.variance()) << "\n";
  write_output(spec.out, csv.str());
  out << csv.str();
  return 0;
}

std::vector<std::string> subcommand_names() {
  return {"predict", "variance", "bias", "optimize", "rates", "table1", "queue"};
}

// Inserts the key=value pairs of --config files right after the subcommand,
// so that flags typed on the command line come later and win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> config_tokens;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      const auto tokens = read_config_file(args[++i]);
      config_tokens.insert(config_tokens.end(), tokens.begin(), tokens.end());
    } else if (args[i].rfind("--config=", 0) == 0) {
      const auto tokens = read_config_file(args[i].substr(9));
      config_tokens.insert(config_tokens.end(), tokens.begin(), tokens.end());
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_tokens.empty()) return rest;
  const auto subs = subcommand_names();
  for (std::size_t i = 1; i < rest.size(); ++i) {
    if (std::find(subs.begin(), subs.end(), rest[i]) != subs.end()) {
      rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(i) + 1, config_tokens.begin(),
                  config_tokens.end());
      return rest;
    }
  }
  throw UsageError("--config given without a subcommand");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : format_double(v);
}

std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

void write_rates_csv(std::ostream& os, const RateReport& report) {
  os << "n,rmse,stderr\n";
  for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
    os << report.checkpoints[i] << "," << format_double(report.value[i]) << ","
       << format_double(report.stderrs[i]) << "\n";
  }
}

void write_variance_csv(std::ostream& os, const VarianceProbe& probe) {
  os << "delta,var_h,stderr\n";
  for (std::size_t i = 0; i < probe.deltas.size(); ++i) {
    os << format_double(probe.deltas[i]) << "," << format_double(probe.variances[i]) << ","
       << format_double(probe.stderrs[i]) << "\n";
  }
}

void write_bias_csv(std::ostream& os, const BiasProbe& probe) {
  os << "delta,bias,stderr\n";
  for (std::size_t i = 0; i < probe.deltas.size(); ++i) {
    os << format_double(probe.deltas[i]) << "," << format_double(probe.biases[i]) << ","
       << format_double(probe.stderrs[i]) << "\n";
  }
}

void write_table1_csv(std::ostream& os, const std::vector<Table1Cell>& cells) {
  os << "cell,scheme,coupling,method,sigma_hat,sigma_theory,band_lo,band_hi,pass\n";
  for (const auto& c : cells) {
    os << c.cell << "," << to_string(c.scheme) << "," << to_string(c.coupling) << ","
       << to_string(c.method) << "," << format_double(c.sigma_hat) << ","
       << format_double(c.sigma_theory) << "," << format_double(c.band_lo) << ","
       << format_double(c.band_hi) << "," << (c.pass ? "true" : "false") << "\n";
  }
}

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(input);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Finite-difference stochastic approximation laboratory", "fdsa"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.fallthrough();

  RawOptions raw;
  std::map<std::string, CLI::App*> subs;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--seed", raw.seed, "Master seed (default: $SA_CRN_SEED, else 0)");
    s->add_option("--out", raw.out, "CSV output path");
    s->add_option("--threads", threads, "Worker threads (0 = all cores)");
  };
  auto add_estimator = [&](CLI::App* s) {
    s->add_option("--problem", raw.problem, "Problem name");
    s->add_option("--scheme", raw.scheme, "sym | one");
    s->add_option("--coupling", raw.coupling, "crn | ind");
    s->add_option("--method", raw.method, "inv | rej | comp2 | compd");
    s->add_option("--reps", raw.reps, "Replications");
  };
  auto add_schedule = [&](CLI::App* s) {
    s->add_option("--a", raw.a, "Gain scale a");
    s->add_option("--alpha", raw.alpha, "Gain exponent alpha");
    s->add_option("--d", raw.d, "Perturbation scale d");
    s->add_option("--eta", raw.eta, "Perturbation exponent eta");
    s->add_option("--n", raw.n, "Iterations");
    s->add_option("--checkpoints-per-decade", raw.cpd, "Checkpoint density");
  };
  auto add_band = [&](CLI::App* s) {
    s->add_option("--band-lo", raw.band_lo, "Lower end of the verdict band");
    s->add_option("--band-hi", raw.band_hi, "Upper end of the verdict band");
  };

  subs["predict"] = app.add_subcommand("predict", "Rate formulas");
  subs["predict"]->add_option("--alpha", raw.alpha);
  subs["predict"]->add_option("--eta", raw.eta);
  subs["predict"]->add_option("--beta", raw.beta);
  subs["predict"]->add_option("--gamma", raw.gamma);
  subs["predict"]->add_flag("--best", raw.best, "Print the best KW rate for (beta, gamma)");

  subs["variance"] = app.add_subcommand("variance", "Variance exponent probe");
  add_common(subs["variance"]);
  add_estimator(subs["variance"]);
  add_band(subs["variance"]);
  subs["variance"]->add_option("--theta", raw.theta);

  subs["bias"] = app.add_subcommand("bias", "Bias exponent probe");
  add_common(subs["bias"]);
  add_estimator(subs["bias"]);
  add_band(subs["bias"]);
  subs["bias"]->add_option("--theta", raw.theta);
  subs["bias"]->add_option("--protocol", raw.protocol, "reference | direct");

  subs["optimize"] = app.add_subcommand("optimize", "Single KW, RM or MD run");
  add_common(subs["optimize"]);
  add_estimator(subs["optimize"]);
  add_schedule(subs["optimize"]);
  subs["optimize"]->add_option("--algo", raw.algo, "kw | md | rm");
  subs["optimize"]->add_option("--theta0", raw.theta0);
  subs["optimize"]->add_option("--noise-sd", raw.noise_sd);
  subs["optimize"]->add_option("--averaging", raw.averaging, "uniform | weighted");

  subs["rates"] = app.add_subcommand("rates", "Replicated RMSE or gap curve with slope fit");
  add_common(subs["rates"]);
  add_estimator(subs["rates"]);
  add_schedule(subs["rates"]);
  add_band(subs["rates"]);
  subs["rates"]->add_option("--algo", raw.algo, "kw | md");
  subs["rates"]->add_option("--averaging", raw.averaging, "uniform | weighted");
  subs["rates"]->add_option("--burn-in", raw.burn_in, "Fraction of the log-n range dropped before fitting");

  subs["table1"] = app.add_subcommand("table1", "Full rate-table suite");
  add_common(subs["table1"]);
  subs["table1"]->add_option("--reps", raw.reps);
  subs["table1"]->add_option("--n", raw.n);
  subs["table1"]->add_option("--variance-reps", raw.variance_reps);
  subs["table1"]->add_option("--checkpoints-per-decade", raw.cpd);

  subs["queue"] = app.add_subcommand("queue", "Lindley queue utilities");
  add_common(subs["queue"]);
  subs["queue"]->add_option("--reps", raw.reps);
  subs["queue"]->add_option("--theta", raw.theta);
  subs["queue"]->add_option("--delta", raw.delta);
  subs["queue"]->add_option("--customers", raw.customers);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::string sub;
  for (const auto& [name, ptr] : subs) {
    if (ptr->parsed()) sub = name;
  }

  try {
    if (sub == "predict") {
      if (raw.alpha <= 0.0 && !raw.best) throw UsageError("predict: --alpha must be positive");
      return cmd_predict(raw, out);
    }
    std::size_t default_reps = 400;
    if (sub == "variance") default_reps = 10000;
    if (sub == "bias") default_reps = 10000;
    if (sub == "queue") default_reps = 10000;
    const ExperimentSpec spec = validate(sub, raw, threads, default_reps);
    if (sub == "variance") return cmd_variance(spec, raw, out);
    if (sub == "bias") return cmd_bias(spec, raw, out);
    if (sub == "optimize") return cmd_optimize(spec, raw, out);
    if (sub == "rates") return cmd_rates(spec, raw, out);
    if (sub == "table1") return cmd_table1(spec, raw, out);
    if (sub == "queue") return cmd_queue(spec, raw, out);
    throw UsageError("unknown subcommand");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace fdsa::cli
