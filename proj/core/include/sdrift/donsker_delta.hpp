#pragma once

#include <cstddef>
#include <vector>

#include "sdrift/market_model.hpp"

namespace sdrift {

/// One term psi * (jump weight) of the forward jump exponent
///   J(x) = sum_k weight_k * (exp(i x psi_k) - 1 - i x psi_k),
/// where weight_k = lambda_j * (length of a piece of [s, t] on which
/// psi(., zeta_j) = psi_k).
struct JumpLoad {
  double psi = 0.0;
  double weight = 0.0;
};

/// Data for E[delta_{Y(t)}(y) | F_s]: the F_s-measurable value m = Y(s),
/// the forward Brownian variance v_c = int_s^t phi^2 and the forward jump
/// loads over the window (s, t].
struct ForwardKernel {
  double m = 0.0;
  double y = 0.0;
  double continuous_variance = 0.0;
  double s = 0.0;
  double t = 0.0;
  std::vector<JumpLoad> loads;

  static ForwardKernel from_driver(const DriverSpec& driver, const LevyMeasure& nu, double s,
                                   double t, double m, double y);

  double jump_variance() const noexcept;
  bool has_jumps() const noexcept;
};

struct QuadConfig {
  double tail_tolerance = 1e-13;
  double nodes_per_unit = 16.0;

  void validate() const;
};

/// (2 pi h)^{-1/2} exp(-(b-y)^2 / (2 h)): conditional density of Brownian
/// motion at level y a time h ahead, given its current offset b - y.
double delta_bm_conditional(double b_minus_y, double horizon);

/// Same for a centred Gaussian increment with the given variance.
double delta_gaussian_conditional(double m_minus_y, double variance);

/// (1/2pi) int exp[i x (m-y) + J(x) - x^2 v_c / 2] dx by composite
/// Gauss-Legendre quadrature. The contour is moved to Im x = c, where c is
/// the saddle point of the tilted exponent on the imaginary axis; the
/// integrand is entire and Gaussian-damped, so the value is unchanged while
/// the result keeps full relative accuracy deep in the tails.
double delta_general_conditional(const ForwardKernel& kernel, const QuadConfig& quad = {});

enum class BoundVariant { GaussianOnly, WithJumpVariance };

/// GaussianOnly: (2 pi v_c)^{-1/2}, always valid since |exp J| <= 1.
/// WithJumpVariance: (2 pi (v_c + int psi^2 nu))^{-1/2}; not valid in general.
double delta_upper_bound(const ForwardKernel& kernel, BoundVariant variant);

struct LambdaMoments {
  double mean = 0.0;
  double second_moment = 0.0;
};

/// Mean and second moment of Lambda(t) = E[delta_{B(t)}(y) | F_{t-theta}]
/// with B a standard Brownian motion. For t < theta the information is F_0
/// and Lambda is the deterministic value (2 pi theta)^{-1/2} e^{-y^2/2theta}.
LambdaMoments lambda_moments(double theta, double t, double y);

}  // namespace sdrift
