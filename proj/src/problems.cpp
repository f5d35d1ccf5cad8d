#include "fdsa/problems.hpp"

#include <cmath>
#include <limits>

#include "fdsa/errors.hpp"
#include "fdsa/sampling.hpp"

namespace fdsa {

namespace {

CompositionMode composition_mode(Method method) {
  return method == Method::composition_derived ? CompositionMode::derived_xi2
                                               : CompositionMode::two_uniform;
}

bool is_composition(Method method) {
  return method == Method::composition_two_uniform || method == Method::composition_derived;
}

}  // namespace

Interval Problem::feasible_interval(double delta, Scheme scheme) const {
  const Interval eval = evaluation_domain();
  const Interval reach = scheme == Scheme::symmetric ? Interval{eval.lo + delta, eval.hi - delta}
                                                     : Interval{eval.lo, eval.hi - delta};
  return intersect(theta_domain(), reach);
}

FamilyProblem::FamilyProblem(std::string name, std::shared_ptr<const ParamFamily> family,
                             LossFn loss, Interval theta_domain, std::optional<GroundTruth> truth,
                             double max_delta)
    : name_(std::move(name)),
      family_(std::move(family)),
      loss_(std::move(loss)),
      domain_(theta_domain),
      truth_(std::move(truth)),
      max_delta_(max_delta) {
  const Interval dom = family_->theta_domain();
  if (!dom.contains(domain_.lo) || !dom.contains(domain_.hi)) {
    throw ConfigError(name_ + ": problem domain exceeds the family domain");
  }
}

bool FamilyProblem::supports(Method method) const {
  switch (method) {
    case Method::inversion:
      return true;
    case Method::rejection:
      return family_->density_bound().has_value() &&
             family_->support(domain_.midpoint()).bounded();
    case Method::composition_two_uniform:
    case Method::composition_derived:
      return family_->as_mixture() != nullptr;
  }
  return false;
}

double FamilyProblem::measure(double theta, Method method, UniformStream& stream) const {
  if (method == Method::inversion) return loss_(sample_inversion(*family_, theta, stream));
  if (method == Method::rejection) return loss_(sample_rejection(*family_, theta, stream).value);
  const MixtureFamily* mix = family_->as_mixture();
  if (!mix) throw UnsupportedFamily(family_->name() + ": composition needs a mixture family");
  return loss_(sample_composition(*mix, theta, stream, composition_mode(method)));
}

std::pair<double, double> FamilyProblem::measure_common(double theta_a, double theta_b,
                                                        Method method, UniformStream& crn,
                                                        UniformStream& retry) const {
  CoupledPair pair;
  if (method == Method::inversion) {
    pair = sample_inversion_pair(*family_, theta_a, theta_b, crn);
  } else if (method == Method::rejection) {
    pair = sample_rejection_pair(*family_, theta_a, theta_b, crn, retry);
  } else {
    const MixtureFamily* mix = family_->as_mixture();
    if (!mix || !is_composition(method)) {
      throw UnsupportedFamily(family_->name() + ": composition needs a mixture family");
    }
    pair = sample_composition_pair(*mix, theta_a, theta_b, crn, composition_mode(method));
  }
  return {loss_(pair.x_minus), loss_(pair.x_plus)};
}

NoiseFreeProblem::NoiseFreeProblem(ProblemPtr inner) : inner_(std::move(inner)) {
  truth_ = inner_->ground_truth();
  if (!truth_ || !truth_->J) throw ConfigError(inner_->name() + ": no closed-form objective");
}

std::shared_ptr<const FamilyProblem> triangular_problem() {
  GroundTruth truth;
  truth.J = [](double t) {
    const double bias = (1.0 + t) / 3.0 - 0.55;
    return (1.0 - t + t * t) / 18.0 + bias * bias;
  };
  truth.dJ = [](double t) { return (t - 0.6) / 3.0; };
  truth.theta_star = 0.6;
  truth.K1 = truth.K2 = 1.0 / 3.0;
  return std::make_shared<FamilyProblem>("triangular", std::make_shared<TriangularMode>(),
                                         LossFn::power(0.55, 2), Interval{0.2, 0.95},
                                         std::move(truth), 0.35);
}

std::shared_ptr<const FamilyProblem> normal_location_problem(double target, int power) {
  if (power != 2 && power != 4) throw ParameterError("normal location loss power must be 2 or 4");
  GroundTruth truth;
  if (power == 2) {
    truth.J = [target](double t) { return (t - target) * (t - target) + 1.0; };
    truth.dJ = [target](double t) { return 2.0 * (t - target); };
    truth.K1 = truth.K2 = 2.0;
  } else {
    truth.J = [target](double t) {
      const double u = t - target;
      return u * u * u * u + 6.0 * u * u + 3.0;
    };
    truth.dJ = [target](double t) {
      const double u = t - target;
      return 4.0 * u * u * u + 12.0 * u;
    };
    truth.K1 = 12.0;
    truth.K2 = 28.0;
  }
  truth.theta_star = target;
  return std::make_shared<FamilyProblem>(
      power == 2 ? "normal2" : "normal4", std::make_shared<NormalLocation>(),
      LossFn::power(target, power), Interval{target - 2.0, target + 2.0}, std::move(truth));
}

std::shared_ptr<const FamilyProblem> atomflat_problem() {
  GroundTruth truth;
  truth.J = [](double t) { return t * t / 4.0 - 0.75 * t + 1.5; };
  truth.dJ = [](double t) { return t / 2.0 - 0.75; };
  return std::make_shared<FamilyProblem>("atomflat", std::make_shared<AtomFlat>(),
                                         LossFn::identity(), Interval{0.2, 0.8}, std::move(truth));
}

std::shared_ptr<const FamilyProblem> uniform_mixture_problem() {
  GroundTruth truth;
  truth.J = [](double t) { return 1.5 - t; };
  truth.dJ = [](double) { return -1.0; };
  return std::make_shared<FamilyProblem>("mixture", make_uniform_mixture(), LossFn::identity(),
                                         Interval{0.1, 0.9}, std::move(truth));
}

std::shared_ptr<const FamilyProblem> interior_mixture_problem(double center) {
  GroundTruth truth;
  truth.J = [center](double t) {
    const double m = 1.0 + 2.0 * t - center;
    return 1.0 / 3.0 + 2.0 * t * (1.0 - t) + m * m;
  };
  truth.dJ = [center](double t) { return 6.0 + 4.0 * t - 4.0 * center; };
  truth.theta_star = center - 1.5;
  truth.K1 = truth.K2 = 4.0;
  return std::make_shared<FamilyProblem>("mixture3", make_binomial_uniform_mixture(),
                                         LossFn::power(center, 2), Interval{0.1, 0.9},
                                         std::move(truth), 0.4);
}

double calibrate_mixture_center(double target_theta, double lo, double hi, std::size_t grid) {
  if (grid < 2 || !(lo < hi)) throw ParameterError("calibration grid needs two points and lo < hi");
  const auto family = make_binomial_uniform_mixture();
  constexpr std::size_t kThetaGrid = 201;
  double best_center = lo;
  double best_miss = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid; ++k) {
    const double center = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid - 1);
    const LossFn loss = LossFn::power(center, 2);
    double argmin = 0.0;
    double best_j = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < kThetaGrid; ++j) {
      const double theta = static_cast<double>(j) / static_cast<double>(kThetaGrid - 1);
      const double J = loss_moments(*family, loss, theta).mean;
      if (J < best_j) {
        best_j = J;
        argmin = theta;
      }
    }
    const double miss = std::abs(argmin - target_theta);
    if (miss < best_miss) {
      best_miss = miss;
      best_center = center;
    }
  }
  return best_center;
}

std::vector<std::string> problem_names() {
  return {"triangular", "normal2", "normal4", "atomflat", "mixture", "mixture3", "gg1"};
}

ProblemPtr make_problem(const std::string& name) {
  if (name == "triangular") return triangular_problem();
  if (name == "normal2") return normal_location_problem(0.0, 2);
  if (name == "normal4") return normal_location_problem(0.0, 4);
  if (name == "atomflat") return atomflat_problem();
  if (name == "mixture") return uniform_mixture_problem();
  if (name == "mixture3") return interior_mixture_problem();
  if (name == "gg1") return std::make_shared<QueueProblem>(default_queue_spec());
  throw ConfigError("unknown problem '" + name + "'");
}

}  // namespace fdsa
