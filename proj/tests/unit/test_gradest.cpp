#include <doctest.h>

#include <cmath>
#include <memory>

#include "fdsa/errors.hpp"
#include "fdsa/gradest.hpp"
#include "fdsa/problems.hpp"
#include "fdsa/sampling.hpp"
#include "fdsa/stats.hpp"
#include "oracles.hpp"

using namespace fdsa;

namespace {

const EstimatorConfig kSymCrn{Scheme::symmetric, Coupling::crn, Method::inversion};
const EstimatorConfig kSymInd{Scheme::symmetric, Coupling::independent, Method::inversion};
const EstimatorConfig kOneCrn{Scheme::one_sided, Coupling::crn, Method::inversion};

}  // namespace

TEST_SUITE("gradest") {

TEST_CASE("quadratic loss on a location family is delta-free under CRN") {
  auto p = make_problem("normal2");
  for (double delta : {0.5, 0.1, 1e-3}) {
    StreamSet s = StreamSet::derive(1, 0);
    for (int i = 0; i < 200; ++i) {
      UniformStream copy = s.crn;
      const double z = normal_quantile(copy.next_uniform());
      const double h = estimate_h(*p, 0.4, delta, kSymCrn, s);
      REQUIRE(h == doctest::Approx(2.0 * (0.4 + z)).epsilon(1e-9));
    }
  }
}

TEST_CASE("exactness identity: variance 4 and no bias") {
  auto p = make_problem("normal2");
  StreamSet s = StreamSet::derive(2, 0);
  MomentAccumulator h;
  for (int i = 0; i < 100000; ++i) h.add(estimate_h(*p, 0.0, 0.05, kSymCrn, s));
  CHECK(h.variance() == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::abs(h.mean()) < 3 * h.mean_stderr());
}

TEST_CASE("constant loss gives a zero estimate in every configuration") {
  const FamilyProblem p("const", std::make_shared<TriangularMode>(), LossFn::constant(2.5), {0.2, 0.8});
  StreamSet s = StreamSet::derive(3, 0);
  for (auto scheme : {Scheme::symmetric, Scheme::one_sided}) {
    for (auto coupling : {Coupling::crn, Coupling::independent}) {
      for (auto method : {Method::inversion, Method::rejection}) {
        CHECK(estimate_h(p, 0.5, 0.1, {scheme, coupling, method}, s) == 0.0);
      }
    }
  }
}

TEST_CASE("one-sided CRN reuses one uniform at theta and theta + delta") {
  auto p = std::dynamic_pointer_cast<const FamilyProblem>(make_problem("triangular"));
  REQUIRE(p);
  StreamSet s = StreamSet::derive(4, 0);
  UniformStream copy = s.crn;
  const double u = copy.next_uniform();
  const double h = estimate_h(*p, 0.5, 0.1, kOneCrn, s);
  const double expect = (p->loss()(p->family().inv_cdf(0.6, u)) - p->loss()(p->family().inv_cdf(0.5, u))) / 0.1;
  CHECK(h == doctest::Approx(expect));
}

TEST_CASE("argument errors") {
  auto p = make_problem("triangular");
  StreamSet s = StreamSet::derive(5, 0);
  CHECK_THROWS_AS(estimate_h(*p, 0.5, 0.0, kSymCrn, s), ParameterError);
  CHECK_THROWS_AS(estimate_h(*p, 0.5, -0.1, kSymCrn, s), ParameterError);
  CHECK_THROWS_AS(estimate_h(*p, 0.95, 0.1, kSymCrn, s), DomainError);
  CHECK_THROWS_AS(EstimatorConfig({Scheme::symmetric, Coupling::crn, Method::rejection}).validate(*make_problem("normal2")),
                  UnsupportedFamily);
}

TEST_CASE("independent symmetric mean matches the quadrature difference quotient") {
  auto p = make_problem("triangular");
  const double theta = 0.45, delta = 0.1;
  StreamSet s = StreamSet::derive(6, 0);
  MomentAccumulator h;
  for (int i = 0; i < 1000000; ++i) h.add(estimate_h(*p, theta, delta, kSymInd, s));
  const double target = (oracle::tri_objective(theta + delta) - oracle::tri_objective(theta - delta)) / (2 * delta);
  CHECK(std::abs(h.mean() - target) < 3 * h.mean_stderr());
}

TEST_CASE("CRN and independent estimators share their mean") {
  for (const char* name : {"triangular", "mixture3"}) {
    auto p = make_problem(name);
    const Method method = std::string(name) == "mixture3" ? Method::composition_two_uniform : Method::rejection;
    MomentAccumulator crn, ind, crn_m;
    StreamSet s = StreamSet::derive(7, 0);
    for (int i = 0; i < 100000; ++i) {
      crn.add(estimate_h(*p, 0.5, 0.05, kSymCrn, s));
      crn_m.add(estimate_h(*p, 0.5, 0.05, {Scheme::symmetric, Coupling::crn, method}, s));
      ind.add(estimate_h(*p, 0.5, 0.05, kSymInd, s));
    }
    CHECK(std::abs(crn.mean() - ind.mean()) < 3 * std::hypot(crn.mean_stderr(), ind.mean_stderr()));
    CHECK(std::abs(crn_m.mean() - ind.mean()) < 3 * std::hypot(crn_m.mean_stderr(), ind.mean_stderr()));
  }
}

TEST_CASE("estimator mean approaches the derivative as delta shrinks") {
  auto p = make_problem("normal4");
  const double theta = 1.0, dj = 4 + 12;  // J'(u) = 4u³ + 12u
  double prev_err = kInf, prev_se = 0.0;
  for (double delta : {0.4, 0.2, 0.1, 0.05}) {
    StreamSet s = StreamSet::derive(8, 0);
    MomentAccumulator h;
    for (int i = 0; i < 200000; ++i) h.add(estimate_h(*p, theta, delta, kOneCrn, s));
    const double err = std::abs(h.mean() - dj);
    CHECK(err <= prev_err + 3 * std::hypot(h.mean_stderr(), prev_se));
    prev_err = err;
    prev_se = h.mean_stderr();
  }
}

TEST_CASE("bias probe on the quartic location problem") {
  auto p = make_problem("normal4");
  const auto grid = default_delta_grid();
  const BiasProbe sym = bias_probe(*p, 1.0, grid, 20000, kSymCrn, 9);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double expect = 4 * grid[j] * grid[j];
    CHECK(std::abs(sym.biases[j] - expect) < 3 * sym.stderrs[j] + 1e-12);
  }
  CHECK(sym.beta_hat > 1.8);
  CHECK(sym.beta_hat < 2.2);
  const BiasProbe one = bias_probe(*p, 1.0, grid, 20000, kOneCrn, 9);
  CHECK(one.beta_hat > 0.9);
  CHECK(one.beta_hat < 1.1);
}

TEST_CASE("symmetric bias on the triangular problem is below the noise floor") {
  auto p = make_problem("triangular");
  const BiasProbe b = bias_probe(*p, 0.5, default_delta_grid(), 20000, kSymCrn, 10);
  CHECK(b.below_noise_floor);
  const BiasProbe d = bias_probe(*p, 0.5, default_delta_grid(), 20000, kSymInd, 10, BiasProtocol::direct);
  CHECK(d.below_noise_floor);
}

TEST_CASE("variance probe exponents") {
  auto tri = make_problem("triangular");
  CHECK(variance_probe(*tri, 0.5, default_delta_grid(), 10000, kSymInd, 11).gamma_hat == doctest::Approx(-2.0).epsilon(0.1));
  CHECK(std::abs(variance_probe(*tri, 0.5, default_delta_grid(), 10000, kSymCrn, 11).gamma_hat) <= 0.15);
  CHECK_THROWS_AS(variance_probe(*tri, 0.5, default_delta_grid(), 999, kSymCrn, 11), ParameterError);
}

TEST_CASE("probe results do not depend on the thread count") {
  auto tri = make_problem("triangular");
  const auto a = variance_probe(*tri, 0.5, default_delta_grid(), 4000, kSymInd, 12, 1);
  const auto b = variance_probe(*tri, 0.5, default_delta_grid(), 4000, kSymInd, 12, 4);
  CHECK(a.variances == b.variances);
  CHECK(a.gamma_hat == b.gamma_hat);
}

TEST_CASE("nominal contracts") {
  for (auto scheme : {Scheme::symmetric, Scheme::one_sided}) {
    for (auto coupling : {Coupling::crn, Coupling::independent}) {
      for (double g : {0.0, -1.0}) {
        const EstimatorContract c = nominal_contract({scheme, coupling, Method::inversion}, g);
        CHECK((c.beta == 1.0 || c.beta == 2.0));
        CHECK((c.gamma == -2.0 || c.gamma == -1.0 || c.gamma == 0.0));
        CHECK(c.beta == (scheme == Scheme::symmetric ? 2.0 : 1.0));
        CHECK(c.gamma == (coupling == Coupling::independent ? -2.0 : g));
      }
    }
  }
}

}
