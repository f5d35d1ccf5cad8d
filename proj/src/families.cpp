#include <algorithm>
#include <cmath>
#include <numbers>

#include "fdsa/distributions.hpp"
#include "fdsa/errors.hpp"
#include "fdsa/stats.hpp"

namespace fdsa {

namespace {

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

// ---- TriangularMode --------------------------------------------------------

std::vector<Segment> TriangularMode::segments(double theta) const {
  std::vector<Segment> out;
  if (theta > 0.0) out.push_back({SegmentKind::smooth, 0.0, theta, 0.0, theta});
  if (theta < 1.0) out.push_back({SegmentKind::smooth, theta, 1.0, theta, 1.0});
  return out;
}

double TriangularMode::cdf_at(double theta, double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x < theta) return x * x / theta;
  return 1.0 - (1.0 - x) * (1.0 - x) / (1.0 - theta);
}

double TriangularMode::inv_cdf_at(double theta, double u) const {
  if (u < theta) return std::sqrt(u * theta);
  return 1.0 - std::sqrt((1.0 - u) * (1.0 - theta));
}

double TriangularMode::density_at(double theta, double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x < theta) return 2.0 * x / theta;
  return 2.0 * (1.0 - x) / (1.0 - theta);
}

double TriangularMode::d_cdf_dtheta(double theta, double x) const {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  if (x < theta) return -x * x / (theta * theta);
  return -(1.0 - x) * (1.0 - x) / ((1.0 - theta) * (1.0 - theta));
}

double TriangularMode::d_density_dtheta(double theta, double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x < theta) return -2.0 * x / (theta * theta);
  return 2.0 * (1.0 - x) / ((1.0 - theta) * (1.0 - theta));
}

// ---- NormalLocation --------------------------------------------------------

std::vector<Segment> NormalLocation::segments(double) const {
  return {{SegmentKind::smooth, -kInf, kInf, 0.0, 1.0}};
}

double NormalLocation::cdf_at(double theta, double x) const { return normal_cdf(x - theta); }

double NormalLocation::inv_cdf_at(double theta, double u) const {
  return theta + normal_quantile(u);
}

double NormalLocation::density_at(double theta, double x) const {
  return std_normal_pdf(x - theta);
}

double NormalLocation::d_cdf_dtheta(double theta, double x) const {
  return -std_normal_pdf(x - theta);
}

double NormalLocation::d_density_dtheta(double theta, double x) const {
  return (x - theta) * std_normal_pdf(x - theta);
}

// ---- AtomFlat --------------------------------------------------------------

std::vector<Segment> AtomFlat::segments(double theta) const {
  const double level = 0.5 * theta;
  return {{SegmentKind::smooth, 0.0, theta, 0.0, level},
          {SegmentKind::flat, theta, 1.0, level, level},
          {SegmentKind::smooth, 1.0, 2.0, level, 1.0}};
}

double AtomFlat::cdf_at(double theta, double x) const {
  if (x <= 0.0) return 0.0;
  if (x < theta) return 0.5 * x;
  if (x < 1.0) return 0.5 * theta;
  if (x < 2.0) return 0.5 * theta + (1.0 - 0.5 * theta) * (x - 1.0);
  return 1.0;
}

double AtomFlat::density_at(double theta, double x) const {
  if (x < 0.0) return 0.0;
  if (x < theta) return 0.5;
  if (x < 1.0) return 0.0;
  if (x <= 2.0) return 1.0 - 0.5 * theta;
  return 0.0;
}

double AtomFlat::d_cdf_dtheta(double theta, double x) const {
  if (x < theta || x >= 2.0) return 0.0;
  if (x < 1.0) return 0.5;
  return 0.5 * (2.0 - x);
}

double AtomFlat::d_density_dtheta(double, double x) const {
  return (x >= 1.0 && x <= 2.0) ? -0.5 : 0.0;
}

double AtomFlat::flat_level_derivative(double, std::size_t index) const {
  if (index != 1) throw UnsupportedFamily("atomflat: segment is not flat");
  return 0.5;
}

double AtomFlat::smooth_inverse(double theta, double u, const Segment& seg) const {
  if (seg.left == 0.0) return 2.0 * u;
  const double level = 0.5 * theta;
  return 1.0 + (u - level) / (1.0 - level);
}

// ---- ExponentialScale ------------------------------------------------------

std::vector<Segment> ExponentialScale::segments(double) const {
  return {{SegmentKind::smooth, 0.0, kInf, 0.0, 1.0}};
}

double ExponentialScale::cdf_at(double theta, double x) const {
  return x <= 0.0 ? 0.0 : -std::expm1(-x / theta);
}

double ExponentialScale::inv_cdf_at(double theta, double u) const { return -theta * std::log1p(-u); }

double ExponentialScale::density_at(double theta, double x) const {
  return x < 0.0 ? 0.0 : std::exp(-x / theta) / theta;
}

// ---- Components ------------------------------------------------------------

UniformComponent::UniformComponent(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw ParameterError("uniform component needs lo < hi");
}

double UniformComponent::cdf(double x) const {
  return std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0);
}

double UniformComponent::density(double x) const {
  return (x >= lo_ && x <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
}

ExponentialComponent::ExponentialComponent(double mean) : mean_(mean) {
  if (!(mean > 0.0)) throw ParameterError("exponential component needs a positive mean");
}

double ExponentialComponent::cdf(double x) const { return x <= 0.0 ? 0.0 : -std::expm1(-x / mean_); }

double ExponentialComponent::inv_cdf(double u) const { return -mean_ * std::log1p(-u); }

double ExponentialComponent::density(double x) const {
  return x < 0.0 ? 0.0 : std::exp(-x / mean_) / mean_;
}

// ---- MixtureFamily ---------------------------------------------------------

MixtureFamily::MixtureFamily(std::string name, std::vector<std::shared_ptr<const Component>> components,
                             MixtureWeights weights, Interval theta_domain)
    : name_(std::move(name)),
      components_(std::move(components)),
      weights_(std::move(weights)),
      domain_(theta_domain) {
  if (components_.empty()) throw ParameterError("mixture needs at least one component");
}

Interval MixtureFamily::support(double) const {
  Interval s{kInf, -kInf};
  for (const auto& c : components_) {
    s.lo = std::min(s.lo, c->support().lo);
    s.hi = std::max(s.hi, c->support().hi);
  }
  return s;
}

std::vector<double> MixtureFamily::breakpoints(double) const {
  std::vector<double> cuts;
  for (const auto& c : components_) {
    const Interval s = c->support();
    if (std::isfinite(s.lo)) cuts.push_back(s.lo);
    if (std::isfinite(s.hi)) cuts.push_back(s.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

std::vector<Segment> MixtureFamily::segments(double theta) const {
  const Interval s = support(theta);
  std::vector<double> cuts;
  if (!std::isfinite(s.lo)) cuts.push_back(s.lo);
  for (double b : breakpoints(theta)) cuts.push_back(b);
  if (!std::isfinite(s.hi)) cuts.push_back(s.hi);

  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i];
    const double r = cuts[i + 1];
    double probe;
    if (std::isfinite(l) && std::isfinite(r)) {
      probe = 0.5 * (l + r);
    } else if (std::isfinite(l)) {
      probe = l + 1.0;
    } else {
      probe = r - 1.0;
    }
    const double fl = std::isfinite(l) ? cdf_at(theta, l) : 0.0;
    const double fr = std::isfinite(r) ? cdf_at(theta, r) : 1.0;
    const SegmentKind kind = density_at(theta, probe) > 0.0 ? SegmentKind::smooth : SegmentKind::flat;
    out.push_back({kind, l, r, fl, kind == SegmentKind::flat ? fl : fr});
  }
  return out;
}

double MixtureFamily::cdf_at(double theta, double x) const {
  const auto p = weights_.p(theta);
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) total += p[i] * components_[i]->cdf(x);
  return total;
}

double MixtureFamily::density_at(double theta, double x) const {
  const auto p = weights_.p(theta);
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) total += p[i] * components_[i]->density(x);
  return total;
}

double MixtureFamily::d_cdf_dtheta(double theta, double x) const {
  const auto dp = weights_.dp(theta);
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) total += dp[i] * components_[i]->cdf(x);
  return total;
}

double MixtureFamily::d_density_dtheta(double theta, double x) const {
  const auto dp = weights_.dp(theta);
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) total += dp[i] * components_[i]->density(x);
  return total;
}

std::optional<double> MixtureFamily::density_bound() const {
  double c = 0.0;
  for (const auto& comp : components_) {
    const Interval s = comp->support();
    if (!s.bounded()) return std::nullopt;
    // Every shipped bounded component is uniform, whose density peaks anywhere inside.
    c = std::max(c, comp->density(s.midpoint()));
  }
  return c;
}

std::vector<double> MixtureFamily::cumulative(double theta) const {
  const auto p = weights_.p(theta);
  std::vector<double> rho(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) rho[i + 1] = rho[i] + p[i];
  rho.back() = 1.0;
  return rho;
}

std::vector<double> MixtureFamily::cumulative_derivatives(double theta) const {
  const auto dp = weights_.dp(theta);
  std::vector<double> drho(dp.size() + 1, 0.0);
  for (std::size_t i = 0; i < dp.size(); ++i) drho[i + 1] = drho[i] + dp[i];
  drho.back() = 0.0;
  return drho;
}

std::size_t MixtureFamily::select_component(double theta, double u) const {
  const auto rho = cumulative(theta);
  const std::size_t m = components_.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (u < rho[i + 1]) return i;
  }
  return m - 1;
}

// ---- Catalog instances -----------------------------------------------------

std::shared_ptr<const MixtureFamily> make_uniform_mixture() {
  MixtureWeights w{[](double t) { return std::vector<double>{t, 1.0 - t}; },
                   [](double) { return std::vector<double>{1.0, -1.0}; }};
  return std::make_shared<MixtureFamily>(
      "uniform_mixture",
      std::vector<std::shared_ptr<const Component>>{std::make_shared<UniformComponent>(0.0, 1.0),
                                                    std::make_shared<UniformComponent>(1.0, 2.0)},
      std::move(w), Interval{0.1, 0.9});
}

std::shared_ptr<const MixtureFamily> make_binomial_uniform_mixture() {
  MixtureWeights w{
      [](double t) { return std::vector<double>{(1 - t) * (1 - t), 2 * t * (1 - t), t * t}; },
      [](double t) { return std::vector<double>{-2 * (1 - t), 2 - 4 * t, 2 * t}; }};
  return std::make_shared<MixtureFamily>(
      "binomial_uniform_mixture",
      std::vector<std::shared_ptr<const Component>>{std::make_shared<UniformComponent>(0.0, 2.0),
                                                    std::make_shared<UniformComponent>(1.0, 3.0),
                                                    std::make_shared<UniformComponent>(2.0, 4.0)},
      std::move(w), Interval{0.0, 1.0});
}

std::shared_ptr<const MixtureFamily> make_exponential_mixture(double mean_a, double mean_b) {
  MixtureWeights w{[](double t) { return std::vector<double>{t, 1.0 - t}; },
                   [](double) { return std::vector<double>{1.0, -1.0}; }};
  return std::make_shared<MixtureFamily>(
      "exponential_mixture",
      std::vector<std::shared_ptr<const Component>>{std::make_shared<ExponentialComponent>(mean_a),
                                                    std::make_shared<ExponentialComponent>(mean_b)},
      std::move(w), Interval{0.0, 1.0});
}

}  // namespace fdsa
