#include "sdrift/donsker_delta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdrift/errors.hpp"
#include "sdrift/quadrature.hpp"
#include "sdrift/root_finding.hpp"

namespace sdrift {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxPanels = 1u << 20;

// h(c) = c^2 v/2 - c d + sum w (e^{-c psi} - 1 + c psi): log of the integrand
// on the imaginary axis x = i c. Convex in c.
double tilt_exponent(double c, double d, double v, const std::vector<JumpLoad>& loads) {
  double h = 0.5 * c * c * v - c * d;
  for (const auto& l : loads) h += l.weight * (std::expm1(-c * l.psi) + c * l.psi);
  return h;
}

double saddle_point(double d, double v, const std::vector<JumpLoad>& loads) {
  if (d == 0.0) return 0.0;
  auto dh = [&](double c) {
    double g = c * v - d;
    double g2 = v;
    for (const auto& l : loads) {
      const double e = std::exp(-c * l.psi);
      g += -l.weight * l.psi * std::expm1(-c * l.psi);
      g2 += l.weight * l.psi * l.psi * e;
    }
    return std::pair{g, g2};
  };
  // The jump part of h' has the sign of c, so the root lies between 0 and d/v.
  const double far = d / v;
  const double lo = std::min(0.0, far);
  const double hi = std::max(0.0, far);
  return solve_monotone(dh, lo, hi, 0.0).x;
}

}  // namespace

ForwardKernel ForwardKernel::from_driver(const DriverSpec& driver, const LevyMeasure& nu,
                                         double s, double t, double m, double y) {
  if (!(t >= s)) throw DomainError("ForwardKernel: window end must not precede its start");
  ForwardKernel k;
  k.m = m;
  k.y = y;
  k.s = s;
  k.t = t;
  k.continuous_variance = driver.continuous_variance(s, t);
  for (std::size_t j = 0; j < nu.size() && j < driver.psi.size(); ++j) {
    const double lambda = nu[j].lambda;
    driver.psi[j].for_each_piece(s, t, [&](double len, double psi) {
      if (psi != 0.0) k.loads.push_back({psi, lambda * len});
    });
  }
  return k;
}

double ForwardKernel::jump_variance() const noexcept {
  double s = 0.0;
  for (const auto& l : loads) s += l.weight * l.psi * l.psi;
  return s;
}

bool ForwardKernel::has_jumps() const noexcept {
  return std::any_of(loads.begin(), loads.end(),
                     [](const JumpLoad& l) { return l.psi != 0.0 && l.weight > 0.0; });
}

void QuadConfig::validate() const {
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
    throw ArgumentError("QuadConfig: tail_tolerance must lie in (0, 1)");
  }
  if (!(nodes_per_unit >= 16.0)) throw ArgumentError("QuadConfig: nodes_per_unit must be >= 16");
}

double delta_gaussian_conditional(double m_minus_y, double variance) {
  if (!(variance > 0.0)) throw DomainError("delta_gaussian_conditional: variance must be > 0");
  return std::exp(-0.5 * m_minus_y * m_minus_y / variance) / std::sqrt(kTwoPi * variance);
}

double delta_bm_conditional(double b_minus_y, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("delta_bm_conditional: horizon t - s must be > 0");
  return delta_gaussian_conditional(b_minus_y, horizon);
}

double delta_general_conditional(const ForwardKernel& k, const QuadConfig& quad) {
  quad.validate();
  const double v = k.continuous_variance;
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("ForwardKernel: invalid variance");
  if (v == 0.0) {
    if (k.has_jumps()) {
      throw UnsupportedKernelError(
          "delta_general_conditional: no Brownian variance on the forward window; "
          "pure-jump kernels are not supported");
    }
    throw DomainError("delta_general_conditional: forward variance is zero");
  }

  const double d = k.m - k.y;
  const double c = saddle_point(d, v, k.loads);
  const double h = tilt_exponent(c, d, v, k.loads);

  // Tilted loads: on Im x = c the jump term becomes w e^{-c psi} e^{i x psi}.
  struct Tilted { double psi, weight, tilted; };
  std::vector<Tilted> tl;
  tl.reserve(k.loads.size());
  double psi_drift = 0.0;  // sum w psi
  double osc = 0.0;
  double max_psi = 0.0;
  for (const auto& l : k.loads) {
    const double wt = l.weight * std::exp(-c * l.psi);
    tl.push_back({l.psi, l.weight, wt});
    psi_drift += l.weight * l.psi;
    osc += wt * std::abs(l.psi);
    max_psi = std::max(max_psi, std::abs(l.psi));
  }
  const double linear_phase = d - c * v - psi_drift;
  osc += std::abs(linear_phase);

  // |integrand| <= e^h e^{-x^2 v/2} on the shifted contour.
  const double x_max = std::sqrt(2.0 * std::log(1.0 / quad.tail_tolerance) / v);
  const double units = x_max * std::sqrt(v) + x_max * (osc + max_psi) / (2.0 * std::numbers::pi);
  const double nodes = quad.nodes_per_unit * units;
  const auto panels = static_cast<std::size_t>(std::clamp(
      std::ceil(nodes / kGaussLegendreOrder), 4.0, static_cast<double>(kMaxPanels)));

  auto integrand = [&](double x) {
    double re = -0.5 * x * x * v;
    double im = x * linear_phase;
    for (const auto& l : tl) {
      const double xp = x * l.psi;
      re += l.tilted * (std::cos(xp) - 1.0);
      im += l.tilted * std::sin(xp);
    }
    return std::exp(re) * std::cos(im);
  };
  const double integral = composite_gauss_legendre(integrand, 0.0, x_max, panels);
  return std::exp(h) * integral / std::numbers::pi;
}

double delta_upper_bound(const ForwardKernel& k, BoundVariant variant) {
  double denom = k.continuous_variance;
  if (variant == BoundVariant::WithJumpVariance) denom += k.jump_variance();
  if (!(denom > 0.0)) throw DomainError("delta_upper_bound: zero forward variance");
  return 1.0 / std::sqrt(kTwoPi * denom);
}

LambdaMoments lambda_moments(double theta, double t, double y) {
  if (!(theta > 0.0)) throw DomainError("lambda_moments: theta must be > 0");
  if (!(t >= 0.0)) throw DomainError("lambda_moments: t must be >= 0");
  LambdaMoments mom;
  if (t < theta) {
    mom.mean = delta_bm_conditional(y, theta);
    mom.second_moment = mom.mean * mom.mean;
    return mom;
  }
  mom.mean = delta_bm_conditional(y, t);
  const double spread = 2.0 * t - theta;
  mom.second_moment = std::exp(-y * y / spread) / (kTwoPi * std::sqrt(theta) * std::sqrt(spread));
  return mom;
}

}  // namespace sdrift
