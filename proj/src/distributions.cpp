#include "fdsa/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdsa/errors.hpp"
#include "fdsa/quadrature.hpp"

namespace fdsa {

namespace {

constexpr double kQuadTol = 1e-10;

double below_one(double u) { return std::min(u, std::nextafter(1.0, 0.0)); }

template <class F>
double integrate_smooth_pieces(const ParamFamily& family, double theta, F&& integrand) {
  double total = 0.0;
  for (const Segment& seg : family.segments(theta)) {
    if (seg.kind != SegmentKind::smooth || !(seg.left < seg.right)) continue;
    total += integrate(integrand, seg.left, seg.right, {}, kQuadTol);
  }
  return total;
}

}  // namespace

void ParamFamily::check_theta(double theta) const {
  if (!theta_domain().contains(theta)) {
    std::ostringstream msg;
    msg << name() << ": theta " << theta << " outside [" << theta_domain().lo << ", "
        << theta_domain().hi << "]";
    throw DomainError(msg.str());
  }
}

double ParamFamily::cdf(double theta, double x) const {
  check_theta(theta);
  return std::clamp(cdf_at(theta, x), 0.0, 1.0);
}

double ParamFamily::inv_cdf(double theta, double u) const {
  check_theta(theta);
  if (!(u >= 0.0 && u < 1.0)) throw DomainError(name() + ": inv_cdf argument outside [0, 1)");
  return inv_cdf_at(theta, u);
}

double ParamFamily::density(double theta, double x) const {
  check_theta(theta);
  return density_at(theta, x);
}

double ParamFamily::inv_cdf_at(double theta, double u) const {
  const std::vector<Segment> segs = segments(theta);
  for (const Segment& seg : segs) {
    if (seg.kind == SegmentKind::flat) continue;
    if (u < seg.cdf_right) {
      return seg.kind == SegmentKind::jump ? seg.left : smooth_inverse(theta, u, seg);
    }
  }
  return segs.empty() ? support(theta).hi : segs.back().right;
}

double ParamFamily::smooth_inverse(double theta, double u, const Segment& seg) const {
  if (u <= seg.cdf_left) return seg.left;

  double lo = seg.left;
  double hi = seg.right;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    const double anchor = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
    if (!std::isfinite(lo)) {
      double step = 1.0;
      lo = anchor - step;
      while (cdf_at(theta, lo) > u && step < 1e300) {
        hi = std::min(hi, lo);
        step *= 2.0;
        lo = anchor - step;
      }
    }
    if (!std::isfinite(hi)) {
      double step = 1.0;
      hi = std::max(anchor, lo) + step;
      while (cdf_at(theta, hi) <= u && step < 1e300) {
        lo = std::max(lo, hi);
        step *= 2.0;
        hi = std::max(anchor, lo) + step;
      }
    }
  }

  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = cdf_at(theta, x) - u;
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    const double d = density_at(theta, x);
    double next = d > 0.0 ? x - fx / d : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double ParamFamily::d_cdf_dtheta(double theta, double x) const {
  return (cdf_at(theta + kThetaStep, x) - cdf_at(theta - kThetaStep, x)) / (2.0 * kThetaStep);
}

double ParamFamily::d_density_dtheta(double theta, double x) const {
  return (density_at(theta + kThetaStep, x) - density_at(theta - kThetaStep, x)) /
         (2.0 * kThetaStep);
}

double ParamFamily::flat_level_derivative(double theta, std::size_t index) const {
  const auto up = segments(theta + kThetaStep);
  const auto down = segments(theta - kThetaStep);
  if (index >= up.size() || index >= down.size() || up[index].kind != SegmentKind::flat ||
      down[index].kind != SegmentKind::flat) {
    throw UnsupportedFamily(name() + ": segment layout changes within the derivative step");
  }
  return (up[index].cdf_level() - down[index].cdf_level()) / (2.0 * kThetaStep);
}

double ParamFamily::transport(double from, double to, double x) const {
  return inv_cdf_at(to, below_one(std::clamp(cdf_at(from, x), 0.0, 1.0)));
}

std::vector<double> ParamFamily::breakpoints(double theta) const {
  std::vector<double> out;
  for (const Segment& seg : segments(theta)) {
    if (std::isfinite(seg.left)) out.push_back(seg.left);
    if (std::isfinite(seg.right)) out.push_back(seg.right);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LossFn LossFn::identity() { return {[](double x) { return x; }, 1.0, "x"}; }

LossFn LossFn::power(double center, int exponent) {
  std::ostringstream name;
  name << "(x-" << center << ")^" << exponent;
  return {[center, exponent](double x) { return std::pow(x - center, exponent); }, 0.0,
          name.str()};
}

LossFn LossFn::constant(double value) {
  return {[value](double) { return value; }, 0.0, "const"};
}

LossMoments loss_moments(const ParamFamily& family, const LossFn& loss, double theta) {
  const auto segs = family.segments(theta);
  double mean = integrate_smooth_pieces(family, theta, [&](double x) {
    return loss(x) * family.density_at(theta, x);
  });
  for (const Segment& seg : segs) {
    if (seg.kind == SegmentKind::jump) mean += seg.jump_mass() * loss(seg.left);
  }
  double var = integrate_smooth_pieces(family, theta, [&](double x) {
    const double d = loss(x) - mean;
    return d * d * family.density_at(theta, x);
  });
  for (const Segment& seg : segs) {
    if (seg.kind != SegmentKind::jump) continue;
    const double d = loss(seg.left) - mean;
    var += seg.jump_mass() * d * d;
  }
  return {mean, var};
}

double m1(const ParamFamily& family, const LossFn& loss, double theta) {
  const auto segs = family.segments(theta);
  double total = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].kind != SegmentKind::flat) continue;
    const double dl = loss(segs[i].right) - loss(segs[i].left);
    total += dl * dl * std::abs(family.flat_level_derivative(theta, i));
  }
  return 2.0 * total;
}

double m2(const ParamFamily& family, const LossFn& loss, double theta, double density_bound_c) {
  const Interval s = family.support(theta);
  if (!s.bounded()) throw UnsupportedFamily(family.name() + ": m2 requires bounded support");
  if (!(density_bound_c > 0.0)) throw ParameterError("m2: density bound must be positive");
  const double var = loss_moments(family, loss, theta).variance;
  const double tv = integrate_smooth_pieces(family, theta, [&](double x) {
    return std::abs(family.d_density_dtheta(theta, x));
  });
  return var / (2.0 * density_bound_c * s.width()) * tv;
}

double coupled_rejection_constant(const ParamFamily& family, const LossFn& loss, double theta) {
  const LossMoments mom = loss_moments(family, loss, theta);
  const double weighted = integrate_smooth_pieces(family, theta, [&](double x) {
    const double d = loss(x) - mom.mean;
    return std::abs(family.d_density_dtheta(theta, x)) * (d * d + mom.variance);
  });
  return 0.5 * weighted;
}

double m3(const MixtureFamily& mix, const LossFn& loss, double theta) {
  const auto drho = mix.cumulative_derivatives(theta);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < mix.size(); ++i) {
    const double w = std::abs(drho[i + 1]);
    if (w == 0.0) continue;
    const Component& lower = mix.component(i);
    const Component& upper = mix.component(i + 1);
    const double e = integrate(
        [&](double xi) {
          const double d = loss(upper.inv_cdf(xi)) - loss(lower.inv_cdf(xi));
          return d * d;
        },
        0.0, 1.0, {}, kQuadTol);
    total += e * w;
  }
  return total;
}

double m4(const MixtureFamily& mix, const LossFn& loss, double theta) {
  const auto drho = mix.cumulative_derivatives(theta);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < mix.size(); ++i) {
    const Interval lower = mix.component(i).support();
    const Interval upper = mix.component(i + 1).support();
    if (!lower.bounded() || !upper.bounded()) {
      throw UnsupportedFamily(mix.name() + ": m4 is infinite for unbounded components");
    }
    const double d = loss(upper.hi) - loss(lower.lo);
    total += d * d * std::abs(drho[i + 1]);
  }
  return total;
}

double fisher_like_integral(const ParamFamily& family, double theta) {
  return integrate_smooth_pieces(family, theta, [&](double x) {
    const double f = family.density_at(theta, x);
    if (!(f > 0.0)) return 0.0;
    const double g = family.d_cdf_dtheta(theta, x);
    return g * g / f;
  });
}

}  // namespace fdsa
