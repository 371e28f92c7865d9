#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "sdrift/errors.hpp"

namespace sdrift {

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Root of a non-decreasing function on a bracket [lo, hi] with
/// f(lo) <= 0 <= f(hi). `f_df(x)` returns {f(x), f'(x)}. Newton steps are
/// taken when they stay strictly inside the current bracket and at least
/// halve the previous step; otherwise the bracket is bisected. Stops when
/// |f| <= abs_tol or the bracket collapses to a few ulps.
template <class FDF>
RootResult solve_monotone(FDF&& f_df, double lo, double hi, double abs_tol, int max_iter = 400) {
  if (!(lo <= hi)) throw ArgumentError("solve_monotone: empty bracket");
  auto [flo, dlo] = f_df(lo);
  if (flo >= 0.0) return {lo, flo, 0};
  auto [fhi, dhi] = f_df(hi);
  if (fhi <= 0.0) return {hi, fhi, 0};
  (void)dlo;

  double x = 0.5 * (lo + hi);
  // Start from the better-informed endpoint when the derivative is usable.
  if (std::isfinite(fhi) && dhi > 0.0) {
    const double cand = hi - fhi / dhi;
    if (cand > lo && cand < hi) x = cand;
  }
  double fx = 0.0;
  double prev_step = hi - lo;
  for (int it = 1; it <= max_iter; ++it) {
    auto [f, df] = f_df(x);
    fx = f;
    if (std::abs(f) <= abs_tol) return {x, f, it};
    if (f < 0.0) lo = x; else hi = x;
    const double width_floor = 4.0 * std::numeric_limits<double>::epsilon() *
                               std::max({1.0, std::abs(lo), std::abs(hi)});
    if (hi - lo <= width_floor) return {x, f, it};
    double next = 0.5 * (lo + hi);
    if (std::isfinite(f) && df > 0.0 && std::isfinite(df)) {
      const double newton = x - f / df;
      if (newton > lo && newton < hi && 2.0 * std::abs(newton - x) <= prev_step) next = newton;
    }
    if (next == x) return {x, f, it};
    prev_step = std::abs(next - x);
    x = next;
  }
  return {x, fx, max_iter};
}

}  // namespace sdrift
