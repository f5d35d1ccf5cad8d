#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdsa/errors.hpp"
#include "fdsa/prng.hpp"
#include "fdsa/rates.hpp"
#include "fdsa/stats.hpp"

using namespace fdsa;

TEST_SUITE("stats") {

TEST_CASE("moments of a small sample") {
  MomentAccumulator m;
  for (double x : {1.0, 2.0, 3.0, 4.0}) m.add(x);
  CHECK(m.mean() == doctest::Approx(2.5));
  CHECK(m.variance() == doctest::Approx(5.0 / 3.0));
  CHECK(m.fourth_central() == doctest::Approx((2 * 5.0625 + 2 * 0.0625) / 4.0));
  CHECK(m.mean_stderr() == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("least squares recovers an exact line") {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
  const LinearFit f = ordinary_least_squares(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.slope_stderr < 1e-12);
}

TEST_CASE("normal quantile inverts the normal cdf") {
  for (double u : {1e-9, 1e-4, 0.02, 0.3, 0.5, 0.77, 0.975, 1 - 1e-7}) {
    CHECK(std::abs(normal_cdf(normal_quantile(u)) - u) < 1e-9 * std::max(1.0, u / (1 - u)));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("KS statistic of a perfect grid") {
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) xs.push_back((i + 0.5) / 100.0);
  CHECK(ks_statistic(xs, [](double u) { return u; }) == doctest::Approx(0.005));
}

}

TEST_SUITE("rates") {

std::vector<double> grid() {
  std::vector<double> n;
  for (int k = 0; k <= 40; ++k) n.push_back(std::pow(10.0, 3.0 + k / 20.0));
  return n;
}

TEST_CASE("exact power laws") {
  const auto n = grid();
  std::vector<double> v1, v2;
  for (double x : n) {
    v1.push_back(std::pow(x, -0.5));
    v2.push_back(3.0 * std::pow(x, -0.4));
  }
  const SlopeFit f1 = fit_loglog_slope(n, v1);
  CHECK(std::abs(f1.slope - 0.5) < 1e-12);
  const SlopeFit f2 = fit_loglog_slope(n, v2);
  CHECK(std::abs(f2.slope - 0.4) < 1e-12);
  CHECK(f2.intercept == doctest::Approx(std::log(3.0)));
}

TEST_CASE("noisy power law") {
  const auto n = grid();
  UniformStream s = derive_stream({11, 0, 0});
  std::vector<double> v;
  for (double x : n) v.push_back(std::pow(x, -1.0 / 3.0) * (1.0 + 0.05 * normal_quantile(s.next_uniform())));
  CHECK(std::abs(fit_loglog_slope(n, v).slope - 1.0 / 3.0) < 0.03);
}

TEST_CASE("fit contract errors") {
  const auto n = grid();
  std::vector<double> v(n.size(), 1.0);
  v[20] = 0.0;
  CHECK_THROWS_AS(fit_loglog_slope(n, v), FitError);
  const std::vector<double> few_n{1, 2, 3, 4, 5, 6, 7, 8}, few_v(8, 1.0);
  CHECK_THROWS_AS(fit_loglog_slope(few_n, few_v), FitError);
}

TEST_CASE("noise-free curve equals the deterministic error") {
  auto inner = make_problem("triangular");
  NoiseFreeProblem p(inner);
  RunConfig rc;
  rc.schedule = {6.0, 1.0, 1.0, 0.5};
  rc.n_total = 2000;
  rc.reps = 50;
  rc.checkpoints = geometric_checkpoints(20, 2000);
  const RateReport r = rmse_curve(p, rc);
  StreamSet s = StreamSet::derive(0, 0);
  const Trajectory t = kw_run(p, rc.estimator, rc.schedule, rc.n_total, s, rc.checkpoints);
  for (std::size_t i = 0; i < t.checkpoints.size(); ++i) {
    CHECK(r.value[i] == doctest::Approx(std::abs(t.theta[i] - 0.6)).epsilon(1e-12));
    CHECK(r.stderrs[i] < 1e-12);
  }
}

TEST_CASE("doubling replications roughly halves the squared stderr") {
  auto p = make_problem("triangular");
  RunConfig rc;
  rc.schedule = {6.0, 1.0, 1.0, 1.0 / 6};
  rc.estimator.coupling = Coupling::independent;
  rc.n_total = 1000;
  rc.checkpoints = geometric_checkpoints(10, 1000);
  rc.reps = 200;
  const RateReport a = rmse_curve(*p, rc);
  rc.reps = 400;
  const RateReport b = rmse_curve(*p, rc);
  const double ratio = b.stderrs.back() * b.stderrs.back() / (a.stderrs.back() * a.stderrs.back());
  CHECK(ratio > 0.3);
  CHECK(ratio < 0.8);
}

TEST_CASE("too few replications is rejected") {
  auto p = make_problem("triangular");
  RunConfig rc;
  rc.reps = 10;
  rc.checkpoints = {10};
  CHECK_THROWS_AS(rmse_curve(*p, rc), ParameterError);
}

}
