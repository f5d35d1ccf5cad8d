#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fdsa {

/// Running moments up to order four (central), numerically stable updates.
class MomentAccumulator {
 public:
  void add(double x) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const noexcept;
  /// Fourth central sample moment (biased, 1/n).
  double fourth_central() const noexcept;
  /// Standard error of the mean.
  double mean_stderr() const noexcept;
  /// Large-sample standard error of the sample variance.
  double variance_stderr() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

/// Ordinary least squares of y on x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y);

/// sup |F_n(x) - F(x)| for the sample against a continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// 1% critical value of the one-sample KS statistic, 1.63 / sqrt(n).
double ks_critical_1pct(std::size_t n);

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal quantile: rational approximation polished by one Halley step.
double normal_quantile(double u);

}  // namespace fdsa
