#include <algorithm>
#include <cmath>

#include "fdsa/errors.hpp"
#include "fdsa/problems.hpp"

namespace fdsa {

std::vector<double> lindley_system_times(std::span<const double> interarrivals,
                                         std::span<const double> services) {
  if (interarrivals.size() != services.size()) {
    throw ParameterError("lindley: interarrival and service counts differ");
  }
  std::vector<double> t(services.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < services.size(); ++i) {
    prev = std::max(prev - interarrivals[i], 0.0) + services[i];
    t[i] = prev;
  }
  return t;
}

double lindley_average(std::span<const double> interarrivals, std::span<const double> services) {
  if (services.empty()) throw ParameterError("lindley: at least one customer required");
  const auto t = lindley_system_times(interarrivals, services);
  double sum = 0.0;
  for (double v : t) sum += v;
  return sum / static_cast<double>(t.size());
}

double lindley_avg_system_time(const QueueModel& model, double theta, UniformStream& stream) {
  if (model.customers == 0) throw ParameterError("lindley: at least one customer required");
  if (!model.service->theta_domain().contains(theta)) {
    throw DomainError("queue: service parameter outside its domain");
  }
  double prev = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < model.customers; ++i) {
    const double u = stream.next_uniform();
    const double v = stream.next_uniform();
    const double a = model.interarrival->inv_cdf_at(model.interarrival_theta, u);
    const double s = model.service->inv_cdf_at(theta, v);
    prev = std::max(prev - a, 0.0) + s;
    sum += prev;
  }
  return sum / static_cast<double>(model.customers);
}

std::pair<std::vector<double>, std::vector<double>> online_crn_transform(
    const ParamFamily& service, double theta, double delta, std::span<const double> services) {
  const Interval dom = service.theta_domain();
  if (!dom.contains(theta - delta) || !dom.contains(theta + delta)) {
    throw DomainError(service.name() + ": transformed parameter outside the family domain");
  }
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.reserve(services.size());
  out.second.reserve(services.size());
  for (double s : services) {
    out.first.push_back(delta == 0.0 ? s : service.transport(theta, theta - delta, s));
    out.second.push_back(delta == 0.0 ? s : service.transport(theta, theta + delta, s));
  }
  return out;
}

QueueSpec default_queue_spec() {
  QueueSpec spec;
  // fdsa_calibrate_queue 0.6 200000 0.02 gives 19.108 ± 0.035.
  spec.cost = 19.11;
  spec.theta_star = 0.6;
  return spec;
}

QueueProblem::QueueProblem(QueueSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.lambda > 0.0) || !(spec_.mean_fast > 0.0) || !(spec_.mean_slow > 0.0)) {
    throw ConfigError("queue: rates and means must be positive");
  }
  if (spec_.customers == 0) throw ConfigError("queue: at least one customer required");
  const Interval dom = spec_.theta_domain;
  if (!(dom.lo >= 0.0 && dom.hi <= 1.0 && dom.lo < dom.hi)) {
    throw ConfigError("queue: mixture weight domain must lie inside [0, 1]");
  }
  for (double t : {dom.lo, dom.hi}) {
    if (spec_.lambda * mean_service(t) >= 1.0) {
      throw ConfigError("queue: utilization reaches 1 inside the parameter domain");
    }
  }
  model_.interarrival = std::make_shared<ExponentialScale>();
  model_.interarrival_theta = 1.0 / spec_.lambda;
  model_.service = make_exponential_mixture(spec_.mean_fast, spec_.mean_slow);
  model_.customers = spec_.customers;
  if (spec_.theta_star) {
    GroundTruth truth;
    truth.theta_star = spec_.theta_star;
    truth_ = std::move(truth);
  }
}

double QueueProblem::mean_service(double theta) const {
  return theta * spec_.mean_fast + (1.0 - theta) * spec_.mean_slow;
}

double QueueProblem::measure(double theta, Method method, UniformStream& stream) const {
  if (method != Method::inversion) throw UnsupportedFamily("queue: only inversion sampling");
  return lindley_avg_system_time(model_, theta, stream) + spec_.cost * theta;
}

std::pair<double, double> QueueProblem::measure_common(double theta_a, double theta_b,
                                                       Method method, UniformStream& crn,
                                                       UniformStream&) const {
  UniformStream replay = crn;
  const double a = measure(theta_a, method, replay);
  const double b = measure(theta_b, method, crn);
  return {a, b};
}

}  // namespace fdsa
