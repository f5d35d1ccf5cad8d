#include "fdsa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fdsa {

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::span<const double> breakpoints, double rel_tol) {
  if (!(lo < hi)) return 0.0;

  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned kMaxDepth = 30;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += gauss_kronrod<double, 15>::integrate(f, cuts[i], cuts[i + 1], kMaxDepth, rel_tol);
  }
  return total;
}

}  // namespace fdsa
