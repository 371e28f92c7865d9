#pragma once

#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace sdrift {

inline constexpr unsigned kGaussLegendreOrder = 20;

/// Composite Gauss-Legendre rule with `panels` equal panels on [a, b].
template <class F>
double composite_gauss_legendre(F&& f, double a, double b, std::size_t panels) {
  using Rule = boost::math::quadrature::gauss<double, kGaussLegendreOrder>;
  if (panels == 0) panels = 1;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + static_cast<double>(k) * h;
    const double hi = k + 1 == panels ? b : lo + h;
    sum += Rule::integrate(f, lo, hi);
  }
  return sum;
}

}  // namespace sdrift
