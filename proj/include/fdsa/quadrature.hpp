#pragma once

#include <functional>
#include <span>

namespace fdsa {

/// Adaptive 15-point Gauss–Kronrod integration of `f` over [lo, hi].
///
/// The interval is first split at every breakpoint strictly inside it, so
/// piecewise-smooth integrands are only ever integrated over smooth pieces.
/// Infinite endpoints are allowed. `rel_tol` applies per piece.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::span<const double> breakpoints = {}, double rel_tol = 1e-9);

}  // namespace fdsa
