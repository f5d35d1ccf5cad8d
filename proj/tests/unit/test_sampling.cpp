#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "fdsa/distributions.hpp"
#include "fdsa/errors.hpp"
#include "fdsa/prng.hpp"
#include "fdsa/sampling.hpp"
#include "fdsa/stats.hpp"

using namespace fdsa;

namespace {

constexpr std::size_t kN = 100000;

std::shared_ptr<const MixtureFamily> unit_uniform() {
  std::vector<std::shared_ptr<const Component>> comps{std::make_shared<UniformComponent>(0.0, 1.0)};
  MixtureWeights w{[](double) { return std::vector<double>{1.0}; },
                   [](double) { return std::vector<double>{0.0}; }};
  return std::make_shared<MixtureFamily>("u01", comps, w, Interval{0.0, 1.0});
}

Envelope tent() {
  return {[](double x) { return x <= 0.5 ? 4 * x : 4 * (1 - x); },
          [](double u) { return u < 0.5 ? std::sqrt(u / 2) : 1 - std::sqrt((1 - u) / 2); }};
}

template <class Sampler>
void check_marginals(const ParamFamily& fam, double tm, double tp, Sampler&& sampler) {
  std::vector<double> lo(kN), hi(kN);
  for (std::size_t i = 0; i < kN; ++i) {
    const CoupledPair p = sampler();
    lo[i] = p.x_minus;
    hi[i] = p.x_plus;
  }
  CHECK(ks_statistic(lo, [&](double x) { return fam.cdf(tm, x); }) < ks_critical_1pct(kN));
  CHECK(ks_statistic(hi, [&](double x) { return fam.cdf(tp, x); }) < ks_critical_1pct(kN));
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("inversion consumes one uniform and applies the inverse") {
  TriangularMode tri;
  CHECK(tri.inv_cdf(0.6, 0.36) == doctest::Approx(std::sqrt(0.36 * 0.6)));
  CHECK(tri.inv_cdf(0.6, 0.36) == doctest::Approx(0.4648).epsilon(1e-4));
  CHECK(tri.inv_cdf(0.6, 0.0) == 0.0);
  UniformStream s = derive_stream({1, 0, 0});
  UniformStream copy = s;
  const double x = sample_inversion(tri, 0.6, s);
  CHECK(s.draw_count() == 1);
  CHECK(x == tri.inv_cdf(0.6, copy.next_uniform()));
}

TEST_CASE("coupled inversion") {
  NormalLocation nl;
  UniformStream s = derive_stream({2, 0, 0});
  for (int i = 0; i < 100; ++i) {
    UniformStream copy = s;
    const CoupledPair p = sample_inversion_coupled(nl, 0.3, 0.1, s);
    const double z = normal_quantile(copy.next_uniform());
    CHECK(p.x_minus == doctest::Approx(0.2 + z));
    CHECK(p.x_plus == doctest::Approx(0.4 + z));
    CHECK(s.draw_count() == static_cast<std::uint64_t>(i + 1));
  }
  TriangularMode tri;
  const CoupledPair same = sample_inversion_coupled(tri, 0.5, 0.0, s);
  CHECK(same.equal);
  CHECK_THROWS_AS(sample_inversion_coupled(tri, 0.95, 0.1, s), DomainError);
  check_marginals(tri, 0.45, 0.55, [&] { return sample_inversion_coupled(tri, 0.5, 0.05, s); });
}

TEST_CASE("plain rejection") {
  TriangularMode tri;
  UniformStream s = derive_stream({3, 0, 0});
  std::vector<double> xs(kN);
  double rounds = 0;
  for (auto& x : xs) {
    const RejectionDraw d = sample_rejection(tri, 0.5, s);
    x = d.value;
    rounds += static_cast<double>(d.rounds);
  }
  CHECK(ks_statistic(xs, [&](double x) { return tri.cdf(0.5, x); }) < ks_critical_1pct(kN));
  CHECK(std::abs(rounds / kN - 2.0) < 0.1);

  const auto u01 = unit_uniform();
  for (int i = 0; i < 1000; ++i) REQUIRE(sample_rejection(*u01, 0.5, s).rounds == 1);
  CHECK_THROWS_AS(sample_rejection(NormalLocation(), 0.0, s), UnsupportedFamily);
}

TEST_CASE("generalized rejection") {
  TriangularMode tri;
  SUBCASE("uniform envelope reduces to plain rejection") {
    UniformStream a = derive_stream({4, 0, 0}), b = a;
    const Envelope flat{[](double) { return 1.0; }, [](double u) { return u; }};
    for (int i = 0; i < 1000; ++i) {
      REQUIRE(sample_rejection_generalized(tri, flat, 2.0, 0.3, a).value == sample_rejection(tri, 0.3, b).value);
    }
  }
  SUBCASE("tent envelope with the minimal constant") {
    UniformStream s = derive_stream({5, 0, 0});
    std::vector<double> xs(kN);
    for (auto& x : xs) x = sample_rejection_generalized(tri, tent(), 1.0 / 0.6, 0.3, s).value;
    CHECK(ks_statistic(xs, [&](double x) { return tri.cdf(0.3, x); }) < ks_critical_1pct(kN));
  }
  SUBCASE("too small a constant is detected") {
    UniformStream s = derive_stream({6, 0, 0});
    bool thrown = false;
    for (int i = 0; i < 10000 && !thrown; ++i) {
      try {
        sample_rejection_generalized(tri, tent(), 1.0, 0.3, s);
      } catch (const EnvelopeError&) {
        thrown = true;
      }
    }
    CHECK(thrown);
  }
}

TEST_CASE("coupled rejection") {
  TriangularMode tri;
  StreamSet s = StreamSet::derive(7, 0);
  for (int i = 0; i < 1000; ++i) {
    const CoupledPair p = sample_rejection_coupled(tri, 0.5, 0.0, s.crn, s.retry);
    REQUIRE(p.equal);
    REQUIRE(p.x_minus == p.x_plus);
  }
  check_marginals(tri, 0.45, 0.55, [&] { return sample_rejection_coupled(tri, 0.5, 0.05, s.crn, s.retry); });

  // Mismatch probability is ∫|f(θ+δ) − f(θ−δ)|/2 over the union region, linear in δ.
  std::vector<double> k;
  for (double delta : {0.1, 0.05, 0.025}) {
    std::size_t mismatched = 0;
    for (std::size_t i = 0; i < kN; ++i) {
      if (!sample_rejection_coupled(tri, 0.5, delta, s.crn, s.retry).equal) ++mismatched;
    }
    k.push_back(static_cast<double>(mismatched) / kN / delta);
  }
  CHECK(k[1] / k[0] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(k[2] / k[0] == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("composition") {
  const auto mix = make_uniform_mixture();
  UniformStream s = derive_stream({8, 0, 0});
  for (auto mode : {CompositionMode::two_uniform, CompositionMode::derived_xi2}) {
    for (int i = 0; i < 1000; ++i) REQUIRE(sample_composition_coupled(*mix, 0.5, 0.0, s, mode).equal);
    check_marginals(*mix, 0.4, 0.6, [&] { return sample_composition_coupled(*mix, 0.5, 0.1, s, mode); });
  }

  // Derived mode: conditional on the selected component, the reused uniform is uniform.
  std::vector<double> first, second;
  for (std::size_t i = 0; i < kN; ++i) {
    const double x = sample_composition(*mix, 0.5, s, CompositionMode::derived_xi2);
    (x < 1.0 ? first : second).push_back(x < 1.0 ? x : x - 1.0);
  }
  auto unif = [](double u) { return u; };
  CHECK(ks_statistic(first, unif) < ks_critical_1pct(first.size()));
  CHECK(ks_statistic(second, unif) < ks_critical_1pct(second.size()));

  std::size_t differ = 0;
  for (std::size_t i = 0; i < kN; ++i) {
    const CoupledPair p = sample_composition_coupled(*mix, 0.5, 0.1, s, CompositionMode::two_uniform);
    if ((p.x_minus < 1.0) != (p.x_plus < 1.0)) ++differ;
  }
  CHECK(std::abs(static_cast<double>(differ) / kN - 0.2) < 0.01);
}

TEST_CASE("coupled and independent differences share their mean") {
  TriangularMode tri;
  const LossFn loss = LossFn::power(0.55, 2);
  const double theta = 0.5, delta = 0.05;
  StreamSet s = StreamSet::derive(9, 0);
  MomentAccumulator inv, rej, ind;
  for (std::size_t i = 0; i < kN; ++i) {
    const CoupledPair a = sample_inversion_coupled(tri, theta, delta, s.crn);
    inv.add((loss(a.x_plus) - loss(a.x_minus)) / (2 * delta));
    const CoupledPair b = sample_rejection_coupled(tri, theta, delta, s.crn, s.retry);
    rej.add((loss(b.x_plus) - loss(b.x_minus)) / (2 * delta));
    const double xp = sample_inversion(tri, theta + delta, s.independent_plus);
    const double xm = sample_inversion(tri, theta - delta, s.independent_minus);
    ind.add((loss(xp) - loss(xm)) / (2 * delta));
  }
  auto combined = [](const MomentAccumulator& a, const MomentAccumulator& b) {
    return 3.0 * std::hypot(a.mean_stderr(), b.mean_stderr());
  };
  CHECK(std::abs(inv.mean() - ind.mean()) < combined(inv, ind));
  CHECK(std::abs(rej.mean() - ind.mean()) < combined(rej, ind));
}

TEST_CASE("inversion coupling on a flat-free family has O(δ²) second moment") {
  TriangularMode tri;
  const LossFn loss = LossFn::power(0.55, 2);
  UniformStream s = derive_stream({10, 0, 0});
  std::vector<double> ratio;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kN; ++i) {
      const CoupledPair p = sample_inversion_coupled(tri, 0.5, delta, s);
      sum += std::pow(loss(p.x_plus) - loss(p.x_minus), 2);
    }
    ratio.push_back(sum / kN / (delta * delta));
  }
  for (double r : ratio) {
    CHECK(r < 2.0 * ratio[0]);
    CHECK(r > 0.5 * ratio[0]);
  }
}

TEST_CASE("coupled rejection variance constant matches the mismatch-law derivation") {
  TriangularMode tri;
  const LossFn loss = LossFn::power(0.55, 2);
  const double theta = 0.5, delta = 1e-2;
  StreamSet s = StreamSet::derive(12, 0);
  MomentAccumulator h;
  for (std::size_t i = 0; i < 400000; ++i) {
    const CoupledPair p = sample_rejection_coupled(tri, theta, delta, s.crn, s.retry);
    h.add((loss(p.x_plus) - loss(p.x_minus)) / (2 * delta));
  }
  CHECK(h.variance() * delta == doctest::Approx(coupled_rejection_constant(tri, loss, theta)).epsilon(0.15));
}

}
