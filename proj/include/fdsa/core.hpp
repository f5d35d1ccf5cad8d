#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace fdsa {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double x, double tol = 1e-12) const noexcept {
    return x >= lo - tol && x <= hi + tol;
  }
  bool bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
  bool empty() const noexcept { return lo > hi; }
  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  double clamp(double x) const noexcept { return std::clamp(x, lo, hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval intersect(const Interval& a, const Interval& b) noexcept {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

/// Finite-difference layout.
enum class Scheme { symmetric, one_sided };

/// Whether the two measurements of a difference share their randomness.
enum class Coupling { crn, independent };

/// Random-variate generation method.
enum class Method { inversion, rejection, composition_two_uniform, composition_derived };

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(Coupling c) noexcept;
std::string_view to_string(Method m) noexcept;

}  // namespace fdsa
