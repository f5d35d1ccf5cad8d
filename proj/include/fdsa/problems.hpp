#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fdsa/core.hpp"
#include "fdsa/distributions.hpp"
#include "fdsa/prng.hpp"

namespace fdsa {

/// Closed-form objective information.
struct GroundTruth {
  std::function<double(double)> J;
  std::function<double(double)> dJ;
  std::optional<double> theta_star;
  double K1 = 0.0;
  double K2 = 0.0;
};

/// A stochastic objective J(θ) = E[L(X(θ,ξ))] that can be measured with
/// independent or common randomness.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  /// Θ: where iterates live.
  virtual Interval theta_domain() const = 0;
  /// Parameters at which a measurement is defined (contains Θ).
  virtual Interval evaluation_domain() const = 0;
  /// Largest perturbation the problem accepts; larger δ_n are capped.
  virtual double max_delta() const { return kInf; }
  virtual bool supports(Method method) const = 0;

  /// One measurement of L at θ.
  virtual double measure(double theta, Method method, UniformStream& stream) const = 0;
  /// Two measurements at θa and θb driven by the same randomness.
  virtual std::pair<double, double> measure_common(double theta_a, double theta_b, Method method,
                                                   UniformStream& crn,
                                                   UniformStream& retry) const = 0;

  virtual const GroundTruth* ground_truth() const { return nullptr; }

  /// Θ intersected with the parameters whose perturbation stays evaluable.
  Interval feasible_interval(double delta, Scheme scheme) const;
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// A problem built from a ParamFamily and a scalar loss.
class FamilyProblem final : public Problem {
 public:
  FamilyProblem(std::string name, std::shared_ptr<const ParamFamily> family, LossFn loss,
                Interval theta_domain, std::optional<GroundTruth> truth = std::nullopt,
                double max_delta = kInf);

  std::string name() const override { return name_; }
  Interval theta_domain() const override { return domain_; }
  Interval evaluation_domain() const override { return family_->theta_domain(); }
  double max_delta() const override { return max_delta_; }
  bool supports(Method method) const override;
  double measure(double theta, Method method, UniformStream& stream) const override;
  std::pair<double, double> measure_common(double theta_a, double theta_b, Method method,
                                           UniformStream& crn, UniformStream& retry) const override;
  const GroundTruth* ground_truth() const override { return truth_ ? &*truth_ : nullptr; }

  const ParamFamily& family() const { return *family_; }
  std::shared_ptr<const ParamFamily> family_ptr() const { return family_; }
  const LossFn& loss() const { return loss_; }

 private:
  std::string name_;
  std::shared_ptr<const ParamFamily> family_;
  LossFn loss_;
  Interval domain_;
  std::optional<GroundTruth> truth_;
  double max_delta_;
};

/// Wraps a problem with ground truth so that every measurement returns J(θ) exactly.
class NoiseFreeProblem final : public Problem {
 public:
  explicit NoiseFreeProblem(ProblemPtr inner);

  std::string name() const override { return inner_->name() + "-noisefree"; }
  Interval theta_domain() const override { return inner_->theta_domain(); }
  Interval evaluation_domain() const override { return inner_->evaluation_domain(); }
  double max_delta() const override { return inner_->max_delta(); }
  bool supports(Method) const override { return true; }
  double measure(double theta, Method, UniformStream&) const override { return truth_->J(theta); }
  std::pair<double, double> measure_common(double theta_a, double theta_b, Method, UniformStream&,
                                           UniformStream&) const override {
    return {truth_->J(theta_a), truth_->J(theta_b)};
  }
  const GroundTruth* ground_truth() const override { return truth_; }

 private:
  ProblemPtr inner_;
  const GroundTruth* truth_;
};

// ---- Catalog ---------------------------------------------------------------

/// TriangularMode, L = (x − 0.55)², Θ = [0.2, 0.95], θ* = 0.6.
std::shared_ptr<const FamilyProblem> triangular_problem();
/// X = θ + Z, L = (x − t)^power with power 2 or 4, Θ = [t − 2, t + 2].
std::shared_ptr<const FamilyProblem> normal_location_problem(double target, int power);
/// AtomFlat, L = x, Θ = [0.2, 0.8]; J known, no interior minimizer.
std::shared_ptr<const FamilyProblem> atomflat_problem();
/// U[0,1]/U[1,2] mixture with p = θ, L = x, Θ = [0.1, 0.9]; J = 3/2 − θ.
std::shared_ptr<const FamilyProblem> uniform_mixture_problem();
/// Binomial-weighted U[0,2]/U[1,3]/U[2,4] mixture with L = (x − center)²,
/// Θ = [0.1, 0.9]; J = 1/3 + 2θ(1−θ) + (1 + 2θ − center)², θ* = center − 1.5.
std::shared_ptr<const FamilyProblem> interior_mixture_problem(double center = 2.0);

/// Names: triangular, normal2, normal4, atomflat, mixture, mixture3, gg1.
ProblemPtr make_problem(const std::string& name);
std::vector<std::string> problem_names();

/// First-order optimality of a center c for the interior mixture: argmin over c
/// of |θ*(c) − target| on a grid, using J evaluated by quadrature.
double calibrate_mixture_center(double target_theta, double lo, double hi, std::size_t grid);

// ---- Queue -----------------------------------------------------------------

/// Single-server FIFO queue with θ-independent interarrivals and a θ-indexed service law.
struct QueueModel {
  std::shared_ptr<const ParamFamily> interarrival;  ///< sampled at interarrival_theta
  double interarrival_theta = 0.0;
  std::shared_ptr<const ParamFamily> service;
  std::size_t customers = 100;
};

/// T_i = max(T_{i−1} − A_i, 0) + S_i with T_0 = 0; returns all T_i.
std::vector<double> lindley_system_times(std::span<const double> interarrivals,
                                         std::span<const double> services);
double lindley_average(std::span<const double> interarrivals, std::span<const double> services);

/// (1/N) Σ T_i with A_i, S_i drawn by inversion from `stream` (u_i then v_i per customer).
double lindley_avg_system_time(const QueueModel& model, double theta, UniformStream& stream);

/// S∓_i = G_s^{-1}(θ∓δ, G_s(θ, S_i)).
std::pair<std::vector<double>, std::vector<double>> online_crn_transform(
    const ParamFamily& service, double theta, double delta, std::span<const double> services);

struct QueueSpec {
  double lambda = 0.5;
  double mean_fast = 1.0;
  double mean_slow = 2.4;
  std::size_t customers = 100;
  /// Staffing cost per unit θ added to the average system time.
  double cost = 0.0;
  Interval theta_domain{0.3, 0.9};
  std::optional<double> theta_star;
};

/// Calibrated defaults for the gg1 catalog entry.
QueueSpec default_queue_spec();

/// Service mixture θ·Exp(mean_fast) + (1−θ)·Exp(mean_slow), Poisson(λ) arrivals,
/// L = (1/N) Σ T_i + cost·θ.
class QueueProblem final : public Problem {
 public:
  explicit QueueProblem(QueueSpec spec);

  std::string name() const override { return "gg1"; }
  Interval theta_domain() const override { return spec_.theta_domain; }
  Interval evaluation_domain() const override { return {0.0, 1.0}; }
  double max_delta() const override { return 0.1; }
  bool supports(Method method) const override { return method == Method::inversion; }
  double measure(double theta, Method method, UniformStream& stream) const override;
  std::pair<double, double> measure_common(double theta_a, double theta_b, Method method,
                                           UniformStream& crn, UniformStream& retry) const override;
  const GroundTruth* ground_truth() const override { return truth_ ? &*truth_ : nullptr; }

  const QueueModel& model() const { return model_; }
  const QueueSpec& spec() const { return spec_; }
  double mean_service(double theta) const;

 private:
  QueueSpec spec_;
  QueueModel model_;
  std::optional<GroundTruth> truth_;
};

}  // namespace fdsa
