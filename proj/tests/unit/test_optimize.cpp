#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdsa/errors.hpp"
#include "fdsa/optimize.hpp"
#include "fdsa/rates.hpp"

using namespace fdsa;

namespace {

const EstimatorConfig kSymCrn{Scheme::symmetric, Coupling::crn, Method::inversion};

std::vector<std::uint64_t> every(std::uint64_t n) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t i = 1; i <= n; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("schedule and checkpoints") {
  const GainSchedule g{2.0, 0.75, 0.5, 0.25};
  double prev_a = kInf, prev_d = kInf;
  for (std::uint64_t n = 1; n < 1000; ++n) {
    CHECK(g.gain(n) > 0.0);
    CHECK(g.gain(n) < prev_a);
    CHECK(g.delta(n) < prev_d);
    prev_a = g.gain(n);
    prev_d = g.delta(n);
  }
  CHECK_THROWS_AS(GainSchedule({0.0, 1.0, 1.0, 0.5}).validate(), ParameterError);
  CHECK_THROWS_AS(GainSchedule({1.0, 1.5, 1.0, 0.5}).validate(), ParameterError);
  const auto cps = geometric_checkpoints(1000, 100000);
  CHECK(cps.front() == 1000);
  CHECK(cps.back() == 100000);
  CHECK(cps.size() == 41);
  for (std::size_t i = 1; i < cps.size(); ++i) CHECK(cps[i] > cps[i - 1]);
}

TEST_CASE("noise-free KW converges on the triangular objective") {
  NoiseFreeProblem p(make_problem("triangular"));
  StreamSet s = StreamSet::derive(0, 0);
  const Trajectory t = kw_run(p, kSymCrn, {6.0, 1.0, 1.0, 0.5}, 10000, s, {10000});
  CHECK(std::abs(t.theta.back() - 0.6) < 1e-3);
}

TEST_CASE("vanishing gains leave the iterate near its start") {
  auto p = make_problem("triangular");
  StreamSet s = StreamSet::derive(1, 0);
  const Trajectory t = kw_run(*p, kSymCrn, {1e-9, 1.0, 1.0, 0.5}, 1000, s, {1000}, 0.5);
  CHECK(std::abs(t.theta.back() - 0.5) < 1e-6);
}

TEST_CASE("KW clamps into the feasible interval and counts it") {
  auto p = make_problem("triangular");
  StreamSet s = StreamSet::derive(2, 0);
  const Trajectory t = kw_run(*p, kSymCrn, {200.0, 1.0, 1.0, 0.5}, 200, s, every(200), 0.9);
  CHECK(t.clamp_events > 0);
  for (double th : t.theta) {
    CHECK(th >= 0.2);
    CHECK(th <= 0.95);
  }
}

TEST_CASE("CRN KW error drops by at least a factor 7 over two decades") {
  auto p = make_problem("triangular");
  RunConfig rc;
  rc.schedule = {6.0, 1.0, 1.0, 0.5};
  rc.n_total = 100000;
  rc.reps = 100;
  rc.checkpoints = {1000, 100000};
  rc.burn_in = 0.0;
  const RateReport r = rmse_curve(*p, rc);
  CHECK(r.value[0] / r.value[1] >= 7.0);
}

TEST_CASE("Robbins-Monro baseline") {
  auto p = make_problem("triangular");
  SUBCASE("noise-free iterates approach the minimizer monotonically") {
    StreamSet s = StreamSet::derive(3, 0);
    const Trajectory t = rm_run(*p, {0.5, 1.0, 1.0, 0.5}, 500, s, every(500), 0.0, 0.25);
    double prev = kInf;
    for (double th : t.theta) {
      CHECK(std::abs(th - 0.6) <= prev);
      prev = std::abs(th - 0.6);
    }
  }
  SUBCASE("fixed point") {
    StreamSet s = StreamSet::derive(4, 0);
    const Trajectory t = rm_run(*p, {6.0, 1.0, 1.0, 0.5}, 500, s, every(500), 0.0, 0.6);
    for (double th : t.theta) CHECK(th == 0.6);
  }
  SUBCASE("unit noise gives the square-root rate") {
    std::vector<double> sq(41, 0.0);
    const auto cps = geometric_checkpoints(1000, 100000);
    const int reps = 200;
    for (int k = 0; k < reps; ++k) {
      StreamSet s = StreamSet::derive(5, k);
      const Trajectory t = rm_run(*p, {6.0, 1.0, 1.0, 0.5}, 100000, s, cps, 1.0);
      for (std::size_t i = 0; i < cps.size(); ++i) sq[i] += t.sq_error[i] / reps;
    }
    std::vector<double> n(cps.begin(), cps.end()), rmse;
    for (double v : sq) rmse.push_back(std::sqrt(v));
    const double slope = fit_loglog_slope(n, rmse).slope;
    CHECK(slope > 0.42);
    CHECK(slope < 0.58);
  }
  CHECK_THROWS_AS(
      [&] {
        StreamSet s = StreamSet::derive(0, 0);
        rm_run(*make_problem("gg1"), {1, 1, 1, 1}, 10, s, {10});
      }(),
      UnsupportedFamily);
}

TEST_CASE("mirror-descent step") {
  const MdConfig wide = MdConfig::for_domain({-1e9, 1e9});
  const MdState s0 = md_start(0.3);
  CHECK(md_step(s0, 2.0, 0.1, wide).theta == doctest::Approx(0.3 - 0.2));
  const MdConfig box = MdConfig::for_domain({0.0, 1.0});
  CHECK(md_step(md_start(1.0), -5.0, 0.5, box).theta == 1.0);
  CHECK(md_step(md_start(0.0), 5.0, 0.5, box).theta == 0.0);
  CHECK_THROWS_AS(md_step(s0, 1.0, 0.0, box), ParameterError);
  MdConfig bad = box;
  bad.radius_r = 0.5;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("averages are convex combinations") {
  const MdConfig box = MdConfig::for_domain({0.0, 1.0});
  MdState s = md_start(0.7);
  for (int i = 1; i <= 50; ++i) {
    s = md_step(s, 0.0, 1.0 / i, box);
    CHECK(s.avg_uniform == doctest::Approx(0.7));
    CHECK(s.avg_weighted == doctest::Approx(0.7));
  }
  s = md_start(0.5);
  for (int i = 1; i <= 200; ++i) {
    s = md_step(s, (i % 3 ? 1.0 : -4.0), 0.3 / std::sqrt(i), box);
    CHECK(s.theta >= 0.0);
    CHECK(s.theta <= 1.0);
    CHECK(s.avg_uniform >= 0.0);
    CHECK(s.avg_uniform <= 1.0);
    CHECK(s.avg_weighted >= 0.0);
    CHECK(s.avg_weighted <= 1.0);
  }
}

TEST_CASE("mirror descent and KW coincide when the projection is inactive") {
  auto p = make_problem("normal2");
  const GainSchedule g{0.05, 0.5, 1.0, 1.0};
  const EstimatorConfig cfg{Scheme::symmetric, Coupling::crn, Method::inversion};
  StreamSet a = StreamSet::derive(6, 0), b = a;
  const Trajectory kw = kw_run(*p, cfg, g, 300, a, every(300), 0.5);
  const Trajectory md = md_run(*p, cfg, MdConfig::for_domain(p->theta_domain()), g, 300, b, every(300), 0.5);
  CHECK(kw.clamp_events == 0);
  double avg = 0.5, prev = 0.5;
  for (std::size_t i = 0; i < 300; ++i) {
    avg += (prev - avg) / static_cast<double>(i + 1);
    REQUIRE(md.theta[i] == avg);
    prev = kw.theta[i];
  }
}

TEST_CASE("mirror descent on the triangular objective") {
  auto p = make_problem("triangular");
  for (auto avg : {Averaging::uniform, Averaging::weighted}) {
    StreamSet s = StreamSet::derive(7, 0);
    const Trajectory t = md_run(*p, kSymCrn, MdConfig::for_domain(p->theta_domain(), avg), {1.0, 0.5, 1.0, 1.0},
                                100000, s, {1000, 100000});
    CHECK(t.gap.back() < 1e-2);
    CHECK(t.gap.back() >= 0.0);
  }
}

TEST_CASE("runs replay bit for bit") {
  auto p = make_problem("triangular");
  const EstimatorConfig cfg{Scheme::one_sided, Coupling::independent, Method::rejection};
  StreamSet a = StreamSet::derive(8, 3), b = StreamSet::derive(8, 3);
  const Trajectory x = kw_run(*p, cfg, {6, 1, 1, 0.25}, 5000, a, geometric_checkpoints(1, 5000));
  const Trajectory y = kw_run(*p, cfg, {6, 1, 1, 0.25}, 5000, b, geometric_checkpoints(1, 5000));
  CHECK(x.theta == y.theta);
}

TEST_CASE("rate predictor values") {
  auto sigma = [](double a, double e, double b, double g) { return predict_sigma(a, e, b, g).sigma; };
  CHECK(std::abs(sigma(1, 1.0 / 6, 2, -2) - 1.0 / 3) < 1e-12);
  CHECK(std::abs(sigma(1, 0.2, 2, -1) - 0.4) < 1e-12);
  CHECK(std::abs(sigma(1, 0.5, 2, 0) - 0.5) < 1e-12);
  CHECK(predict_sigma(1, 0.5, 2, 0).converges);
  CHECK_FALSE(predict_sigma(0.2, 0.5, 2, -1).converges);
  CHECK_THROWS_AS(predict_sigma(0.0, 0.5, 2, 0), ParameterError);

  const BestRate r1 = best_rate_kw(2, -2), r2 = best_rate_kw(1, -1), r3 = best_rate_kw(2, 0);
  CHECK(std::abs(r1.sigma - 1.0 / 3) < 1e-12);
  CHECK(std::abs(r1.eta - 1.0 / 6) < 1e-12);
  CHECK(std::abs(r2.sigma - 1.0 / 3) < 1e-12);
  CHECK(std::abs(r2.eta - 1.0 / 3) < 1e-12);
  CHECK(std::abs(r3.sigma - 0.5) < 1e-12);
  CHECK(std::abs(r3.eta - 0.25) < 1e-12);
  for (const BestRate& r : {r1, r2, r3}) CHECK(r.alpha == 1.0);
}

TEST_CASE("best rate is consistent with the rate formula") {
  for (double beta : {1.0, 2.0}) {
    for (double gamma : {-2.0, -1.0, 0.0}) {
      const BestRate r = best_rate_kw(beta, gamma);
      CHECK(std::abs(predict_sigma(r.alpha, r.eta, beta, gamma).sigma - r.sigma) < 1e-12);
    }
  }
}

TEST_CASE("mirror-descent bound") {
  const GainSchedule g{1.5, 0.5, 0.7, 1.0};
  MdBoundConstants k;
  k.r = 2.0;
  SUBCASE("only the distance term") {
    for (std::uint64_t n : {1ULL, 10ULL, 1000ULL}) {
      CHECK(eval_md_bound(k, g, n) == doctest::Approx(k.r * k.r / 2 / (n * g.gain(n))));
    }
  }
  SUBCASE("symmetric schedule stays below its closed form") {
    k.K2 = 0.4;
    k.b = 0.3;
    k.c_var = 0.8;
    k.beta = 2.0;
    k.gamma = 0.0;
    const double c1 = k.r * k.r / 2, c2 = k.c_var / (2 * k.kappa), c3 = k.K2 * k.K2 * k.r * k.r / (2 * k.kappa * k.kappa);
    const double c4 = k.b * k.b / k.kappa, c5 = k.b * k.r / std::sqrt(2 * k.kappa);
    for (std::uint64_t n : {1ULL, 7ULL, 100ULL, 10000ULL, 1000000ULL}) {
      const double nn = static_cast<double>(n);
      const double closed = (c1 + 2 * c2 + 2 * c3) * std::max(g.a, 1 / g.a) / std::sqrt(nn) +
                            (9 * c4 * std::pow(g.d, 4) / 7) * g.a / nn + 2 * c5 * g.d * g.d / nn;
      CHECK(eval_md_bound(k, g, n) <= closed);
    }
  }
  SUBCASE("nonincreasing over the square-root schedule") {
    k.K2 = 1.0 / 3;
    k.b = 0.1;
    k.c_var = 0.5;
    double prev = kInf;
    for (double v : eval_md_bound_curve(k, g, geometric_checkpoints(10, 1000000))) {
      CHECK(v <= prev);
      prev = v;
    }
  }
  SUBCASE("second-moment mode drops the K2 and bias-squared terms") {
    MdBoundConstants a = k, b = k;
    a.K2 = 5.0;
    a.b = 0.0;
    b.second_moment = true;
    b.c_tilde = 0.8;
    b.K2 = 5.0;
    MdBoundConstants c = k;
    c.c_var = 0.8;
    CHECK(eval_md_bound(b, g, 100) == doctest::Approx(eval_md_bound(c, g, 100)));
  }
}

}
