#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fdsa/cli.hpp"
#include "fdsa/errors.hpp"
#include "fdsa/gradest.hpp"
#include "fdsa/optimize.hpp"
#include "fdsa/problems.hpp"
#include "fdsa/rates.hpp"

namespace py = pybind11;
using namespace fdsa;

namespace {

py::dict rate_dict(const RateReport& r) {
  py::dict d;
  d["descriptor"] = r.descriptor;
  d["checkpoints"] = r.checkpoints;
  d["value"] = r.value;
  d["stderr"] = r.stderrs;
  d["sigma_hat"] = r.sigma_hat;
  d["slope_stderr"] = r.fit.slope_stderr;
  d["r_squared"] = r.fit.r_squared;
  d["aborted"] = r.aborted;
  d["pass"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-difference stochastic approximation with common random numbers.";

  py::enum_<Scheme>(m, "Scheme").value("symmetric", Scheme::symmetric).value("one_sided", Scheme::one_sided);
  py::enum_<Coupling>(m, "Coupling").value("crn", Coupling::crn).value("independent", Coupling::independent);
  py::enum_<Method>(m, "Method")
      .value("inversion", Method::inversion)
      .value("rejection", Method::rejection)
      .value("composition_two_uniform", Method::composition_two_uniform)
      .value("composition_derived", Method::composition_derived);
  py::enum_<Algorithm>(m, "Algorithm").value("kw", Algorithm::kw).value("md", Algorithm::md);

  py::class_<EstimatorConfig>(m, "EstimatorConfig")
      .def(py::init([](Scheme s, Coupling c, Method me) { return EstimatorConfig{s, c, me}; }),
           py::arg("scheme") = Scheme::symmetric, py::arg("coupling") = Coupling::crn,
           py::arg("method") = Method::inversion)
      .def_readwrite("scheme", &EstimatorConfig::scheme)
      .def_readwrite("coupling", &EstimatorConfig::coupling)
      .def_readwrite("method", &EstimatorConfig::method);

  py::class_<GainSchedule>(m, "GainSchedule")
      .def(py::init([](double a, double alpha, double d, double eta) { return GainSchedule{a, alpha, d, eta}; }),
           py::arg("a") = 1.0, py::arg("alpha") = 1.0, py::arg("d") = 1.0, py::arg("eta") = 0.5)
      .def_readwrite("a", &GainSchedule::a)
      .def_readwrite("alpha", &GainSchedule::alpha)
      .def_readwrite("d", &GainSchedule::d)
      .def_readwrite("eta", &GainSchedule::eta)
      .def("gain", &GainSchedule::gain)
      .def("delta", &GainSchedule::delta);

  py::class_<Problem, std::shared_ptr<Problem>>(m, "Problem")
      .def_property_readonly("name", &Problem::name)
      .def_property_readonly("theta_domain", [](const Problem& p) {
        const Interval i = p.theta_domain();
        return py::make_tuple(i.lo, i.hi);
      })
      .def_property_readonly("theta_star", [](const Problem& p) -> py::object {
        const GroundTruth* t = p.ground_truth();
        if (!t || !t->theta_star) return py::none();
        return py::float_(*t->theta_star);
      });

  m.def("problem_names", &problem_names);
  m.def("make_problem", [](const std::string& name) { return std::const_pointer_cast<Problem>(make_problem(name)); });

  m.def("predict_sigma", [](double alpha, double eta, double beta, double gamma) {
    const SigmaPrediction p = predict_sigma(alpha, eta, beta, gamma);
    return py::make_tuple(p.sigma, p.converges);
  }, py::arg("alpha"), py::arg("eta"), py::arg("beta"), py::arg("gamma"));
  m.def("best_rate_kw", [](double beta, double gamma) {
    const BestRate b = best_rate_kw(beta, gamma);
    return py::make_tuple(b.sigma, b.alpha, b.eta);
  }, py::arg("beta"), py::arg("gamma"));

  m.def("estimate_h", [](const Problem& p, double theta, double delta, const EstimatorConfig& cfg,
                         std::uint64_t seed, std::uint64_t replication) {
    StreamSet s = StreamSet::derive(seed, replication);
    return estimate_h(p, theta, delta, cfg, s);
  }, py::arg("problem"), py::arg("theta"), py::arg("delta"), py::arg("config") = EstimatorConfig{},
     py::arg("seed") = 0, py::arg("replication") = 0);

  m.def("variance_probe", [](const Problem& p, double theta, std::size_t reps, const EstimatorConfig& cfg,
                             std::uint64_t seed, unsigned threads) {
    const VarianceProbe v = variance_probe(p, theta, default_delta_grid(), reps, cfg, seed, threads);
    py::dict d;
    d["deltas"] = v.deltas;
    d["variances"] = v.variances;
    d["gamma_hat"] = v.gamma_hat;
    return d;
  }, py::arg("problem"), py::arg("theta"), py::arg("reps") = 10000, py::arg("config") = EstimatorConfig{},
     py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("bias_probe", [](const Problem& p, double theta, std::size_t reps, const EstimatorConfig& cfg,
                         std::uint64_t seed, unsigned threads) {
    const BiasProbe b = bias_probe(p, theta, default_delta_grid(), reps, cfg, seed, BiasProtocol::reference, threads);
    py::dict d;
    d["deltas"] = b.deltas;
    d["biases"] = b.biases;
    d["beta_hat"] = b.beta_hat;
    return d;
  }, py::arg("problem"), py::arg("theta"), py::arg("reps") = 10000, py::arg("config") = EstimatorConfig{},
     py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("rmse_curve", [](const Problem& p, const EstimatorConfig& cfg, const GainSchedule& g, Algorithm algo,
                         std::uint64_t n_total, std::size_t reps, std::uint64_t seed, unsigned threads) {
    RunConfig rc;
    rc.algorithm = algo;
    rc.estimator = cfg;
    rc.schedule = g;
    rc.n_total = n_total;
    rc.reps = reps;
    rc.master_seed = seed;
    rc.checkpoints = geometric_checkpoints(std::max<std::uint64_t>(1, n_total / 100), n_total);
    rc.threads = threads;
    RateReport r;
    {
      py::gil_scoped_release release;
      r = rmse_curve(p, rc);
    }
    return rate_dict(r);
  }, py::arg("problem"), py::arg("config") = EstimatorConfig{}, py::arg("schedule") = GainSchedule{},
     py::arg("algorithm") = Algorithm::kw, py::arg("n_total") = 100000, py::arg("reps") = 400,
     py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("fit_loglog_slope", [](const std::vector<double>& n, const std::vector<double>& v, double burn_in) {
    const SlopeFit f = fit_loglog_slope(n, v, burn_in);
    return py::make_tuple(f.slope, f.slope_stderr, f.r_squared);
  }, py::arg("n"), py::arg("value"), py::arg("burn_in") = 0.25);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    std::vector<std::string> argv{"fdsa"};
    argv.insert(argv.end(), args.begin(), args.end());
    const int code = cli::run(argv, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<UnsupportedFamily>(m, "UnsupportedFamily", PyExc_ValueError);
}
