// Staffing cost that puts the queue optimum at a target θ: cost = −dE[T̄]/dθ,
// estimated by common-random-number central differences.
#include <cstdlib>
#include <iostream>

#include "fdsa/cli.hpp"
#include "fdsa/parallel.hpp"
#include "fdsa/problems.hpp"
#include "fdsa/stats.hpp"

int main(int argc, char** argv) {
  const double target = argc > 1 ? std::atof(argv[1]) : 0.6;
  const std::size_t reps = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 200000;
  const double delta = argc > 3 ? std::atof(argv[3]) : 0.02;

  fdsa::QueueSpec spec = fdsa::default_queue_spec();
  spec.cost = 0.0;
  const fdsa::QueueProblem queue(spec);

  std::vector<double> diff(reps);
  fdsa::parallel_for(reps, 0, [&](std::size_t k) {
    fdsa::StreamSet s = fdsa::StreamSet::derive(0xC0FFEE, k);
    const auto [lo, hi] = queue.measure_common(target - delta, target + delta,
                                                fdsa::Method::inversion, s.crn, s.retry);
    diff[k] = (hi - lo) / (2.0 * delta);
  });
  fdsa::MomentAccumulator acc;
  for (double d : diff) acc.add(d);
  std::cout << "target=" << target << " reps=" << reps << " delta=" << delta << "\n"
            << "cost=" << fdsa::cli::format_double(-acc.mean())
            << " stderr=" << fdsa::cli::format_double(acc.mean_stderr()) << "\n";
  return 0;
}
