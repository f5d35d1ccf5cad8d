#include "fdsa/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "fdsa/errors.hpp"

namespace fdsa {

namespace {

struct Box {
  double a, b, c;
};

Box rejection_box(const ParamFamily& family, double theta_lo, double theta_hi) {
  const auto c = family.density_bound();
  const Interval s1 = family.support(theta_lo);
  const Interval s2 = family.support(theta_hi);
  if (!c || !s1.bounded() || !s2.bounded()) {
    throw UnsupportedFamily(family.name() + ": rejection needs bounded support and a density bound");
  }
  return {std::min(s1.lo, s2.lo), std::max(s1.hi, s2.hi), *c};
}

void check_pair(const ParamFamily& family, double theta_minus, double theta_plus) {
  const Interval dom = family.theta_domain();
  if (!dom.contains(theta_minus) || !dom.contains(theta_plus)) {
    throw DomainError(family.name() + ": perturbed parameter outside the family domain");
  }
}

RejectionDraw rejection_in_box(const ParamFamily& family, double theta, const Box& box,
                               UniformStream& stream) {
  for (std::uint64_t round = 1; round <= kMaxRejectionRounds; ++round) {
    const double x = box.a + (box.b - box.a) * stream.next_uniform();
    const double y = box.c * stream.next_uniform();
    if (y <= family.density_at(theta, x)) return {x, round};
  }
  throw DivergenceError(family.name() + ": rejection sampler exceeded the round limit");
}

double clamp_unit(double u) { return std::clamp(u, 0.0, std::nextafter(1.0, 0.0)); }

double composition_draw(const MixtureFamily& mix, double theta, double xi1, double xi2,
                        CompositionMode mode) {
  const std::size_t i = mix.select_component(theta, xi1);
  if (mode == CompositionMode::derived_xi2) {
    const auto rho = mix.cumulative(theta);
    xi2 = clamp_unit((xi1 - rho[i]) / (rho[i + 1] - rho[i]));
  }
  return mix.component(i).inv_cdf(xi2);
}

}  // namespace

double sample_inversion(const ParamFamily& family, double theta, UniformStream& stream) {
  return family.inv_cdf(theta, stream.next_uniform());
}

CoupledPair sample_inversion_coupled(const ParamFamily& family, double theta, double delta,
                                     UniformStream& stream) {
  return sample_inversion_pair(family, theta - delta, theta + delta, stream);
}

CoupledPair sample_inversion_pair(const ParamFamily& family, double theta_minus, double theta_plus,
                                  UniformStream& stream) {
  check_pair(family, theta_minus, theta_plus);
  const double u = stream.next_uniform();
  CoupledPair pair;
  pair.x_minus = family.inv_cdf_at(theta_minus, u);
  pair.x_plus = family.inv_cdf_at(theta_plus, u);
  pair.equal = pair.x_minus == pair.x_plus;
  return pair;
}

RejectionDraw sample_rejection(const ParamFamily& family, double theta, UniformStream& stream) {
  const Box box = rejection_box(family, theta, theta);
  if (!family.theta_domain().contains(theta)) throw DomainError(family.name() + ": theta outside domain");
  return rejection_in_box(family, theta, box, stream);
}

RejectionDraw sample_rejection_generalized(const ParamFamily& family, const Envelope& envelope,
                                           double envelope_constant, double theta,
                                           UniformStream& stream) {
  if (!family.theta_domain().contains(theta)) throw DomainError(family.name() + ": theta outside domain");
  for (std::uint64_t round = 1; round <= kMaxRejectionRounds; ++round) {
    const double x = envelope.quantile(stream.next_uniform());
    const double top = envelope_constant * envelope.density(x);
    const double f = family.density_at(theta, x);
    if (f > top) throw EnvelopeError(family.name() + ": envelope fails to dominate the density");
    if (top * stream.next_uniform() <= f) return {x, round};
  }
  throw DivergenceError(family.name() + ": generalized rejection exceeded the round limit");
}

CoupledPair sample_rejection_coupled(const ParamFamily& family, double theta, double delta,
                                     UniformStream& stream, UniformStream& retry) {
  return sample_rejection_pair(family, theta - delta, theta + delta, stream, retry);
}

CoupledPair sample_rejection_pair(const ParamFamily& family, double theta_minus, double theta_plus,
                                  UniformStream& stream, UniformStream& retry) {
  check_pair(family, theta_minus, theta_plus);
  const Box box = rejection_box(family, theta_minus, theta_plus);
  CoupledPair pair;
  for (std::uint64_t round = 1; round <= kMaxRejectionRounds; ++round) {
    const double x = box.a + (box.b - box.a) * stream.next_uniform();
    const double y = box.c * stream.next_uniform();
    const bool accept_minus = y <= family.density_at(theta_minus, x);
    const bool accept_plus = y <= family.density_at(theta_plus, x);
    if (accept_minus && accept_plus) {
      pair.x_minus = pair.x_plus = x;
      pair.equal = true;
      pair.rounds = round;
      return pair;
    }
    if (accept_minus) {
      const RejectionDraw other = rejection_in_box(family, theta_plus, box, retry);
      pair.x_minus = x;
      pair.x_plus = other.value;
      pair.rounds = round + other.rounds;
      return pair;
    }
    if (accept_plus) {
      const RejectionDraw other = rejection_in_box(family, theta_minus, box, retry);
      pair.x_minus = other.value;
      pair.x_plus = x;
      pair.rounds = round + other.rounds;
      return pair;
    }
  }
  throw DivergenceError(family.name() + ": coupled rejection exceeded the round limit");
}

double sample_composition(const MixtureFamily& mix, double theta, UniformStream& stream,
                          CompositionMode mode) {
  if (!mix.theta_domain().contains(theta)) throw DomainError(mix.name() + ": theta outside domain");
  const double xi1 = stream.next_uniform();
  const double xi2 = mode == CompositionMode::two_uniform ? stream.next_uniform() : 0.0;
  return composition_draw(mix, theta, xi1, xi2, mode);
}

CoupledPair sample_composition_coupled(const MixtureFamily& mix, double theta, double delta,
                                       UniformStream& stream, CompositionMode mode) {
  return sample_composition_pair(mix, theta - delta, theta + delta, stream, mode);
}

CoupledPair sample_composition_pair(const MixtureFamily& mix, double theta_minus, double theta_plus,
                                    UniformStream& stream, CompositionMode mode) {
  check_pair(mix, theta_minus, theta_plus);
  const double xi1 = stream.next_uniform();
  const double xi2 = mode == CompositionMode::two_uniform ? stream.next_uniform() : 0.0;
  CoupledPair pair;
  pair.x_minus = composition_draw(mix, theta_minus, xi1, xi2, mode);
  pair.x_plus = composition_draw(mix, theta_plus, xi1, xi2, mode);
  pair.equal = pair.x_minus == pair.x_plus;
  return pair;
}

}  // namespace fdsa
