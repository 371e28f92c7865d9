#include "sdrift/optimal_control.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include "sdrift/csv.hpp"
#include "sdrift/errors.hpp"
#include "sdrift/root_finding.hpp"

namespace sdrift {

double consumption_star(double a, double b, double T, double t) {
  if (!(b > 0.0)) throw DomainError("consumption_star: b must be > 0");
  if (!(a >= 0.0)) throw DomainError("consumption_star: a must be >= 0");
  if (!(t >= 0.0 && t <= T)) throw DomainError("consumption_star: t outside [0, T]");
  return a / (b + a * (T - t));
}

RootEquationCoefficients RootEquationCoefficients::at(const MarketParams& m,
                                                      const UtilityWeights& w, double t,
                                                      double conditional_delta,
                                                      CurvatureForm form) {
  RootEquationCoefficients k;
  k.a2 = w.a * (m.T - t) + w.b;
  k.a1 = (form == CurvatureForm::Pointwise ? k.a2 : w.a + w.b) * m.sigma * m.sigma;
  k.rhs = k.a2 * (m.mu - m.r + m.alpha * conditional_delta);
  k.jumps.reserve(m.nu.size());
  for (std::size_t j = 0; j < m.nu.size(); ++j) k.jumps.push_back({m.gamma.at(j), m.nu[j].lambda});
  return k;
}

double root_equation_lhs(double u, const RootEquationCoefficients& k) {
  double sum = 0.0;
  for (const auto& j : k.jumps) {
    const double denom = 1.0 + u * j.gamma;
    if (!(denom > 0.0)) {
      throw DomainError("root_equation_lhs: 1 + u gamma must be > 0 (u = " + std::to_string(u) +
                        ")");
    }
    sum += u * j.gamma * j.gamma * j.lambda / denom;
  }
  return k.a1 * u + k.a2 * sum;
}

double root_equation_derivative(double u, const RootEquationCoefficients& k) {
  double sum = 0.0;
  for (const auto& j : k.jumps) {
    const double denom = 1.0 + u * j.gamma;
    if (!(denom > 0.0)) throw DomainError("root_equation_derivative: 1 + u gamma must be > 0");
    sum += j.gamma * j.gamma * j.lambda / (denom * denom);
  }
  return k.a1 + k.a2 * sum;
}

double solve_portfolio_star(const RootEquationCoefficients& k, double tol) {
  if (!(k.a1 > 0.0) || !(k.a2 > 0.0)) {
    throw DomainError("solve_portfolio_star: a1 and a2 must be > 0");
  }
  if (!(k.rhs > 0.0)) {
    throw HypothesisViolation(
        "solve_portfolio_star: mu - r + alpha E[delta | G_t] must be > 0 (rhs = " +
            std::to_string(k.rhs) + ")",
        k.rhs);
  }
  if (k.jumps.empty()) return k.rhs / k.a1;

  auto f = [&](double u) {
    return std::pair{root_equation_lhs(u, k) - k.rhs, root_equation_derivative(u, k)};
  };
  double hi = 1.0;
  while (f(hi).first < 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("solve_portfolio_star: bracket search diverged");
  }
  const double lo = hi == 1.0 ? 0.0 : 0.5 * hi;
  return solve_monotone(f, lo, hi, tol).x;
}

double pointwise_integrand(double c, double u, double t, double conditional_delta,
                           const MarketParams& m, const UtilityWeights& w) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double jump = 0.0;
  for (std::size_t j = 0; j < m.nu.size(); ++j) {
    const double ug = u * m.gamma.at(j);
    if (!(1.0 + ug > 0.0)) return kNegInf;
    jump += (std::log1p(ug) - ug) * m.nu[j].lambda;
  }
  const double growth = m.r + (m.mu - m.r) * u - c - 0.5 * m.sigma * m.sigma * u * u +
                        m.alpha * u * conditional_delta + jump;
  double value = (w.a * (m.T - t) + w.b) * growth;
  if (w.a > 0.0) {
    if (!(c > 0.0)) return kNegInf;
    value += w.a * std::log(c);
  }
  return value;
}

ConditionalDelta delayed_conditional_delta(const SamplePath& path, const TimeGrid& grid,
                                           std::size_t i, const MarketParams& market,
                                           const DriverSpec& driver, double theta,
                                           const QuadConfig& quad) {
  const double t = grid.time(i);
  ConditionalDelta out;
  double s = 0.0;
  double end = theta;  // window for F_0 information
  double m = 0.0;
  // Slack so that t_i = theta computed in floating point counts as t >= theta.
  if (t - theta >= -1e-9 * grid.dt()) {
    out.info_node = grid.floor_index(t - theta);
    s = grid.time(out.info_node);
    end = t;
    m = path.y[out.info_node];
  }
  if (driver.is_continuous(market.nu)) {
    out.value = delta_gaussian_conditional(m - market.y, driver.continuous_variance(s, end));
  } else {
    out.value = delta_general_conditional(
        ForwardKernel::from_driver(driver, market.nu, s, end, m, market.y), quad);
  }
  return out;
}

PolicyTrajectory delayed_policy(const SamplePath& path, const TimeGrid& grid,
                                const MarketParams& market, const DriverSpec& driver,
                                const UtilityWeights& weights, double theta,
                                const QuadConfig& quad, const PolicyOptions& options) {
  if (!(theta > 0.0)) throw ArgumentError("delayed_policy: theta must be > 0");
  if (path.y.size() != grid.nodes()) throw ArgumentError("delayed_policy: path does not match grid");

  PolicyTrajectory pol;
  pol.path_index = path.index;
  pol.theta = theta;
  const std::size_t n = grid.nodes();
  pol.times.resize(n);
  pol.lambda.resize(n);
  pol.u.resize(n);
  pol.c.resize(n);
  pol.info_node.resize(n);

  // Before theta the information is F_0, so every node shares one value.
  std::optional<ConditionalDelta> initial;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.time(i);
    pol.times[i] = t;
    ConditionalDelta cd;
    if (t - theta < -1e-9 * grid.dt()) {
      if (!initial) initial = delayed_conditional_delta(path, grid, i, market, driver, theta, quad);
      cd = *initial;
    } else {
      cd = delayed_conditional_delta(path, grid, i, market, driver, theta, quad);
    }
    pol.lambda[i] = cd.value;
    pol.info_node[i] = cd.info_node;
    pol.c[i] = consumption_star(weights.a, weights.b, market.T, t);
    const auto coeffs = RootEquationCoefficients::at(market, weights, t, cd.value, options.form);
    try {
      pol.u[i] = solve_portfolio_star(coeffs);
    } catch (const HypothesisViolation&) {
      if (!options.clamp_nonpositive) throw;
      pol.u[i] = 0.0;
      ++pol.clamped;
    }
  }
  return pol;
}

void write_policy_csv(std::ostream& os, const PolicyTrajectory& p, bool header) {
  if (header) os << "path_id,t,Lambda,u_star,c_star\n";
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    os << p.path_index << ',' << csv::real(p.times[i]) << ',' << csv::real(p.lambda[i]) << ','
       << csv::real(p.u[i]) << ',' << csv::real(p.c[i]) << '\n';
  }
}

}  // namespace sdrift
