#pragma once

#include <cstdint>
#include <functional>

#include "fdsa/distributions.hpp"
#include "fdsa/prng.hpp"

namespace fdsa {

/// Two samples drawn from shared randomness: x_minus ~ F(θa,·), x_plus ~ F(θb,·).
struct CoupledPair {
  double x_minus = 0.0;
  double x_plus = 0.0;
  bool equal = false;
  /// Total proposal rounds consumed (rejection samplers only).
  std::uint64_t rounds = 0;
};

struct RejectionDraw {
  double value = 0.0;
  std::uint64_t rounds = 0;
};

/// Proposal law g for generalized rejection, sampled by inversion.
struct Envelope {
  std::function<double(double)> density;
  std::function<double(double)> quantile;
};

enum class CompositionMode { two_uniform, derived_xi2 };

constexpr std::uint64_t kMaxRejectionRounds = 1'000'000;

double sample_inversion(const ParamFamily& family, double theta, UniformStream& stream);

/// One uniform u shared by both coordinates: (F^{-1}(θ−δ,u), F^{-1}(θ+δ,u)).
CoupledPair sample_inversion_coupled(const ParamFamily& family, double theta, double delta,
                                     UniformStream& stream);
/// Same construction at two arbitrary parameters.
CoupledPair sample_inversion_pair(const ParamFamily& family, double theta_minus, double theta_plus,
                                  UniformStream& stream);

/// Uniform proposals on the support box [a,b] × [0,c].
RejectionDraw sample_rejection(const ParamFamily& family, double theta, UniformStream& stream);

/// Proposal ξ₁ ~ g, ξ₂ uniform on [0, A·g(ξ₁)]; throws EnvelopeError when f(θ,ξ₁) > A·g(ξ₁).
RejectionDraw sample_rejection_generalized(const ParamFamily& family, const Envelope& envelope,
                                           double envelope_constant, double theta,
                                           UniformStream& stream);

/// Joint-proposal coupling: a shared acceptance keeps both coordinates equal;
/// a one-sided acceptance keeps that coordinate and regenerates the other
/// from `retry` by plain rejection at its own parameter.
CoupledPair sample_rejection_coupled(const ParamFamily& family, double theta, double delta,
                                     UniformStream& stream, UniformStream& retry);
CoupledPair sample_rejection_pair(const ParamFamily& family, double theta_minus, double theta_plus,
                                  UniformStream& stream, UniformStream& retry);

/// Component selection by ξ₁ against ρ(θ), then inversion of the component.
double sample_composition(const MixtureFamily& mix, double theta, UniformStream& stream,
                          CompositionMode mode);
CoupledPair sample_composition_coupled(const MixtureFamily& mix, double theta, double delta,
                                       UniformStream& stream, CompositionMode mode);
CoupledPair sample_composition_pair(const MixtureFamily& mix, double theta_minus, double theta_plus,
                                    UniformStream& stream, CompositionMode mode);

}  // namespace fdsa
