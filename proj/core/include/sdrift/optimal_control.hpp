#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "sdrift/donsker_delta.hpp"
#include "sdrift/market_model.hpp"
#include "sdrift/path_engine.hpp"

namespace sdrift {

/// c*(t) = a / (b + a (T - t)).
double consumption_star(double a, double b, double T, double t);

struct JumpTerm {
  double gamma = 0.0;
  double lambda = 0.0;
};

/// Which curvature coefficient multiplies sigma^2 u in the portfolio equation.
///  - Pointwise: a1 = (a (T - t) + b) sigma^2, the first-order condition of
///    the pointwise integrand (see pointwise_integrand). Default.
///  - Printed: a1 = (a + b) sigma^2 as stated with the optimality theorem.
/// The two coincide when a = 0.
enum class CurvatureForm { Pointwise, Printed };

/// F(u) = a1 u + a2 sum_j u gamma_j^2 lambda_j / (1 + u gamma_j) = rhs.
struct RootEquationCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double rhs = 0.0;
  std::vector<JumpTerm> jumps;

  /// Coefficients at time t given the conditional delta value E[delta|G_t].
  static RootEquationCoefficients at(const MarketParams& market, const UtilityWeights& weights,
                                     double t, double conditional_delta,
                                     CurvatureForm form = CurvatureForm::Pointwise);
};

double root_equation_lhs(double u, const RootEquationCoefficients& coeffs);
double root_equation_derivative(double u, const RootEquationCoefficients& coeffs);

/// Unique u* > 0 with F(u*) = rhs. Requires rhs > 0 (throws HypothesisViolation
/// otherwise). Closed form rhs / a1 when there are no jumps.
double solve_portfolio_star(const RootEquationCoefficients& coeffs, double tol = 1e-12);

/// Integrand of the reduced objective at one time:
///   a ln c + (a (T - t) + b) * [ r + (mu - r) u - c - sigma^2 u^2 / 2
///       + alpha u Lambda + sum_j (ln(1 + u gamma_j) - u gamma_j) lambda_j ].
/// The a ln c term is dropped when a = 0. Returns -inf outside the domain.
double pointwise_integrand(double c, double u, double t, double conditional_delta,
                           const MarketParams& market, const UtilityWeights& weights);

struct PolicyOptions {
  CurvatureForm form = CurvatureForm::Pointwise;
  // Substitute u = 0 where the positivity hypothesis fails instead of throwing.
  bool clamp_nonpositive = false;
};

inline constexpr std::size_t kInitialInformation = std::numeric_limits<std::size_t>::max();

struct PolicyTrajectory {
  std::size_t path_index = 0;
  double theta = 0.0;
  std::vector<double> times;
  std::vector<double> lambda;  // E[delta_{Y(t)}(y) | F_{t - theta}]
  std::vector<double> u;
  std::vector<double> c;
  // Grid node whose path data determined the values at node i, or
  // kInitialInformation when only F_0 was used (t < theta).
  std::vector<std::size_t> info_node;
  std::size_t clamped = 0;
};

/// Conditional delta E[delta_{Y(t_i)}(y) | F_{t_i - theta}] at grid node i.
/// For t_i >= theta the conditioning node is the last grid node at or
/// before t_i - theta; for t_i < theta it is F_0 with window [0, theta], so
/// Lambda is constant there. Gaussian drivers use the closed form.
struct ConditionalDelta {
  double value = 0.0;
  std::size_t info_node = kInitialInformation;
};
ConditionalDelta delayed_conditional_delta(const SamplePath& path, const TimeGrid& grid,
                                           std::size_t i, const MarketParams& market,
                                           const DriverSpec& driver, double theta,
                                           const QuadConfig& quad);

PolicyTrajectory delayed_policy(const SamplePath& path, const TimeGrid& grid,
                                const MarketParams& market, const DriverSpec& driver,
                                const UtilityWeights& weights, double theta,
                                const QuadConfig& quad = {}, const PolicyOptions& options = {});

/// CSV with header path_id,t,Lambda,u_star,c_star.
void write_policy_csv(std::ostream& os, const PolicyTrajectory& policy, bool header);

}  // namespace sdrift
