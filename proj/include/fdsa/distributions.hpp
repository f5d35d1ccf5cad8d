#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fdsa/core.hpp"

namespace fdsa {

enum class SegmentKind { smooth, flat, jump };

/// One piece of the CDF layout at a fixed θ.
///
/// smooth: F rises strictly from cdf_left to cdf_right over (left, right).
/// flat:   F == cdf_left == cdf_right on [left, right].
/// jump:   left == right == b, F(b-) == cdf_left, F(b) == cdf_right.
struct Segment {
  SegmentKind kind = SegmentKind::smooth;
  double left = 0.0;
  double right = 0.0;
  double cdf_left = 0.0;
  double cdf_right = 0.0;

  double cdf_level() const noexcept { return cdf_left; }
  double jump_mass() const noexcept { return kind == SegmentKind::jump ? cdf_right - cdf_left : 0.0; }
};

class MixtureFamily;

/// A θ-indexed distribution on the real line with a finite piecewise CDF layout.
///
/// Derived classes implement the unchecked `*_at` hooks; the public wrappers
/// validate θ against theta_domain() and u against [0, 1).
class ParamFamily {
 public:
  virtual ~ParamFamily() = default;

  virtual std::string name() const = 0;
  virtual Interval theta_domain() const = 0;
  virtual Interval support(double theta) const = 0;
  /// Ordered layout partitioning the support.
  virtual std::vector<Segment> segments(double theta) const = 0;

  double cdf(double theta, double x) const;
  double inv_cdf(double theta, double u) const;
  double density(double theta, double x) const;

  /// dF(θ,x)/dθ; central difference unless overridden.
  virtual double d_cdf_dtheta(double theta, double x) const;
  /// ∂f(θ,x)/∂θ; central difference unless overridden.
  virtual double d_density_dtheta(double theta, double x) const;
  /// d/dθ of the CDF level of the flat segment at `index` in segments(θ).
  virtual double flat_level_derivative(double theta, std::size_t index) const;

  /// Uniform bound c on the density over all θ, when one exists.
  virtual std::optional<double> density_bound() const { return std::nullopt; }
  /// Non-null for families with a composition decomposition.
  virtual const MixtureFamily* as_mixture() const { return nullptr; }

  /// Maps a sample x of F(from,·) to F^{-1}(to, F(from, x)).
  virtual double transport(double from, double to, double x) const;

  /// Segment endpoints and any interior kinks of f or ∂f/∂θ.
  virtual std::vector<double> breakpoints(double theta) const;

  /// Unchecked CDF, generalized inverse and density.
  virtual double cdf_at(double theta, double x) const = 0;
  virtual double inv_cdf_at(double theta, double u) const;
  virtual double density_at(double theta, double x) const = 0;

  static constexpr double kThetaStep = 1e-6;

 protected:
  /// Inverse of F restricted to a smooth segment; safeguarded Newton by default.
  virtual double smooth_inverse(double theta, double u, const Segment& seg) const;
  void check_theta(double theta) const;
};

/// A θ-independent component distribution of a mixture.
class Component {
 public:
  virtual ~Component() = default;
  virtual Interval support() const = 0;
  virtual double cdf(double x) const = 0;
  virtual double inv_cdf(double u) const = 0;
  virtual double density(double x) const = 0;
  virtual double mean() const = 0;
};

class UniformComponent final : public Component {
 public:
  UniformComponent(double lo, double hi);
  Interval support() const override { return {lo_, hi_}; }
  double cdf(double x) const override;
  double inv_cdf(double u) const override { return lo_ + u * (hi_ - lo_); }
  double density(double x) const override;
  double mean() const override { return 0.5 * (lo_ + hi_); }

 private:
  double lo_, hi_;
};

class ExponentialComponent final : public Component {
 public:
  explicit ExponentialComponent(double mean);
  Interval support() const override { return {0.0, kInf}; }
  double cdf(double x) const override;
  double inv_cdf(double u) const override;
  double density(double x) const override;
  double mean() const override { return mean_; }

 private:
  double mean_;
};

/// Weights p_i(θ) and their θ-derivatives.
struct MixtureWeights {
  std::function<std::vector<double>(double)> p;
  std::function<std::vector<double>(double)> dp;
};

/// F(θ,x) = Σ p_i(θ) F_i(x).
class MixtureFamily final : public ParamFamily {
 public:
  MixtureFamily(std::string name, std::vector<std::shared_ptr<const Component>> components,
                MixtureWeights weights, Interval theta_domain);

  std::string name() const override { return name_; }
  Interval theta_domain() const override { return domain_; }
  Interval support(double theta) const override;
  std::vector<Segment> segments(double theta) const override;
  double cdf_at(double theta, double x) const override;
  double density_at(double theta, double x) const override;
  double d_cdf_dtheta(double theta, double x) const override;
  double d_density_dtheta(double theta, double x) const override;
  std::optional<double> density_bound() const override;
  const MixtureFamily* as_mixture() const override { return this; }
  std::vector<double> breakpoints(double theta) const override;

  std::size_t size() const noexcept { return components_.size(); }
  const Component& component(std::size_t i) const { return *components_.at(i); }
  std::vector<double> weights(double theta) const { return weights_.p(theta); }
  std::vector<double> weight_derivatives(double theta) const { return weights_.dp(theta); }
  /// ρ_0 = 0, ρ_i = p_1 + ... + p_i, ρ_m = 1 (size m + 1).
  std::vector<double> cumulative(double theta) const;
  /// d/dθ of cumulative(θ).
  std::vector<double> cumulative_derivatives(double theta) const;
  /// Index i (0-based) with ρ_i <= u < ρ_{i+1}.
  std::size_t select_component(double theta, double u) const;

 private:
  std::string name_;
  std::vector<std::shared_ptr<const Component>> components_;
  MixtureWeights weights_;
  Interval domain_;
};

/// Support [0,1], mode θ: F = x²/θ below θ and 1 − (1−x)²/(1−θ) above.
class TriangularMode final : public ParamFamily {
 public:
  std::string name() const override { return "triangular"; }
  Interval theta_domain() const override { return {0.0, 1.0}; }
  Interval support(double) const override { return {0.0, 1.0}; }
  std::vector<Segment> segments(double theta) const override;
  double cdf_at(double theta, double x) const override;
  double inv_cdf_at(double theta, double u) const override;
  double density_at(double theta, double x) const override;
  double d_cdf_dtheta(double theta, double x) const override;
  double d_density_dtheta(double theta, double x) const override;
  std::optional<double> density_bound() const override { return 2.0; }
};

/// X = θ + Z with Z standard normal.
class NormalLocation final : public ParamFamily {
 public:
  explicit NormalLocation(Interval domain = {-1e6, 1e6}) : domain_(domain) {}
  std::string name() const override { return "normal"; }
  Interval theta_domain() const override { return domain_; }
  Interval support(double) const override { return {-kInf, kInf}; }
  std::vector<Segment> segments(double theta) const override;
  double cdf_at(double theta, double x) const override;
  double inv_cdf_at(double theta, double u) const override;
  double density_at(double theta, double x) const override;
  double d_cdf_dtheta(double theta, double x) const override;
  double d_density_dtheta(double theta, double x) const override;
  double transport(double from, double to, double x) const override { return x + (to - from); }

 private:
  Interval domain_;
};

/// Support [0,2]: slope ½ on [0,θ], flat at θ/2 on [θ,1], then linear up to 1 on [1,2].
class AtomFlat final : public ParamFamily {
 public:
  std::string name() const override { return "atomflat"; }
  Interval theta_domain() const override { return {0.2, 0.8}; }
  Interval support(double) const override { return {0.0, 2.0}; }
  std::vector<Segment> segments(double theta) const override;
  double cdf_at(double theta, double x) const override;
  double density_at(double theta, double x) const override;
  double d_cdf_dtheta(double theta, double x) const override;
  double d_density_dtheta(double theta, double x) const override;
  double flat_level_derivative(double theta, std::size_t index) const override;
  std::optional<double> density_bound() const override { return 0.9; }

 protected:
  double smooth_inverse(double theta, double u, const Segment& seg) const override;
};

/// Exponential with mean θ: G(θ,t) = 1 − exp(−t/θ).
class ExponentialScale final : public ParamFamily {
 public:
  explicit ExponentialScale(Interval domain = {1e-6, 1e6}) : domain_(domain) {}
  std::string name() const override { return "exponential"; }
  Interval theta_domain() const override { return domain_; }
  Interval support(double) const override { return {0.0, kInf}; }
  std::vector<Segment> segments(double theta) const override;
  double cdf_at(double theta, double x) const override;
  double inv_cdf_at(double theta, double u) const override;
  double density_at(double theta, double x) const override;
  double transport(double from, double to, double x) const override { return x * to / from; }

 private:
  Interval domain_;
};

/// Components U[0,1], U[1,2] with p_1(θ) = θ on Θ = [0.1, 0.9].
std::shared_ptr<const MixtureFamily> make_uniform_mixture();
/// Components U[0,2], U[1,3], U[2,4] with binomial weights (1−θ)², 2θ(1−θ), θ² on [0,1].
std::shared_ptr<const MixtureFamily> make_binomial_uniform_mixture();
/// Exp(mean_a) with weight θ and Exp(mean_b) with weight 1−θ, θ ∈ [0,1].
std::shared_ptr<const MixtureFamily> make_exponential_mixture(double mean_a, double mean_b);

/// A loss L applied to a scalar sample.
struct LossFn {
  std::function<double(double)> fn;
  /// Bound on one-sided x-derivatives of L over the support (0 if unknown).
  double one_sided_derivative_bound = 0.0;
  std::string name;

  double operator()(double x) const { return fn(x); }

  static LossFn identity();
  static LossFn power(double center, int exponent);
  static LossFn constant(double value);
};

/// E[L(X)] and Var[L(X)] under F(θ,·) by quadrature over the smooth pieces.
struct LossMoments {
  double mean = 0.0;
  double variance = 0.0;
};
LossMoments loss_moments(const ParamFamily& family, const LossFn& loss, double theta);

/// 2 Σ over flats of (L(c_i) − L(b_i))² |d F(θ, c_i(θ))/dθ|.
double m1(const ParamFamily& family, const LossFn& loss, double theta);

/// Var[L] / (2c(b−a)) · ∫ₐᵇ |∂f/∂θ| dx. Requires bounded support.
double m2(const ParamFamily& family, const LossFn& loss, double theta, double density_bound_c);

/// Leading constant of Var[h]·δ for the coupled rejection sampler, derived
/// directly from the mismatch law: ½ ∫ |∂f/∂θ| [(L − E L)² + Var L] dx.
double coupled_rejection_constant(const ParamFamily& family, const LossFn& loss, double theta);

/// Σ_{i<m} E[(L(F_{i+1}^{-1}(ξ)) − L(F_i^{-1}(ξ)))²] |ρ_i'(θ)|.
double m3(const MixtureFamily& mix, const LossFn& loss, double theta);

/// Σ_{i<m} [L(F_{i+1}^{-1}(1⁻)) − L(F_i^{-1}(0⁺))]² |ρ_i'(θ)|. Requires bounded components.
double m4(const MixtureFamily& mix, const LossFn& loss, double theta);

/// E[(∂F/∂θ)² / f] over the smooth pieces; finite for regular flat-free families.
double fisher_like_integral(const ParamFamily& family, double theta);

}  // namespace fdsa
