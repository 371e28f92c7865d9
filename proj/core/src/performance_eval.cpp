#include "sdrift/performance_eval.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "sdrift/csv.hpp"
#include "sdrift/errors.hpp"
#include "sdrift/local_time.hpp"
#include "sdrift/parallel.hpp"

namespace sdrift {

namespace {

constexpr double kPi = std::numbers::pi;

double trapezoid(std::span<const double> f, double dt) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dt;
}

}  // namespace

double closed_form_J_hat(double theta, double mu, double alpha, double sigma, double T,
                         ClosedFormVariant variant) {
  if (!(sigma > 0.0)) throw DomainError("closed_form_J_hat: sigma must be > 0");
  if (!(theta > 0.0 && theta <= T)) throw DomainError("closed_form_J_hat: theta outside (0, T]");
  const double s2 = sigma * sigma;
  const double rt = std::sqrt(theta);
  const double a1 = mu * mu * T / (2.0 * s2);
  const double head = std::sqrt(theta / (2.0 * kPi));
  const double tail = 2.0 * (std::sqrt(T) - rt) / std::sqrt(2.0 * kPi);
  const double a2 = variant == ClosedFormVariant::Corrected
                        ? mu * alpha / s2 * (head + tail)
                        : head + mu * alpha / s2 * tail;
  const double a3 = alpha * alpha / (4.0 * kPi * s2) * (1.0 + (std::sqrt(2.0 * T - theta) - rt) / rt);
  return a1 + a2 + a3;
}

double closed_form_variant_gap(double theta, double mu, double alpha, double sigma) {
  return std::sqrt(theta / (2.0 * kPi)) * (1.0 - mu * alpha / (sigma * sigma));
}

bool closed_form_applies(const MarketParams& m, const DriverSpec& driver,
                         const UtilityWeights& w) {
  return w.a == 0.0 && w.b == 1.0 && m.r == 0.0 && m.y == 0.0 && m.nu.empty() &&
         driver.phi.is_identically(1.0);
}

double gaussian_sq_exp_moment(double kappa, double s, double y) {
  if (!(kappa > 0.0)) throw DomainError("gaussian_sq_exp_moment: kappa must be > 0");
  if (!(s > 0.0)) throw DomainError("gaussian_sq_exp_moment: s must be > 0");
  const double q = 1.0 + 2.0 * kappa * s;
  return std::exp(-kappa * y * y / q) / std::sqrt(q);
}

double second_moment_R(double theta, double t, double y) {
  if (!(theta > 0.0)) throw DomainError("second_moment_R: theta must be > 0");
  if (!(theta <= t)) throw DomainError("second_moment_R: requires theta <= t");
  const double spread = 2.0 * t - theta;
  return std::exp(-y * y / spread) / (2.0 * kPi * std::sqrt(theta) * std::sqrt(spread));
}

double policy_objective(const PolicyTrajectory& p, const TimeGrid& grid, const MarketParams& m,
                        const UtilityWeights& w) {
  std::vector<double> g(p.times.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = pointwise_integrand(p.c[i], p.u[i], p.times[i], p.lambda[i], m, w);
  }
  return trapezoid(g, grid.dt());
}

PerfReport evaluate_J(const MarketParams& market, const DriverSpec& driver,
                      const UtilityWeights& weights, double theta, const TimeGrid& grid,
                      std::size_t n_paths, std::uint64_t seed, const QuadConfig& quad,
                      const EvalOptions& options) {
  if (!(theta > 0.0)) throw ArgumentError("evaluate_J: theta must be > 0");
  if (n_paths == 0) throw ArgumentError("evaluate_J: n_paths must be positive");
  const PathSimulator sim(driver, market.nu, grid);
  std::vector<double> values(n_paths);
  std::vector<std::size_t> clamped(n_paths);
  parallel_for(n_paths, options.threads, [&](std::size_t p) {
    SamplePath path;
    sim.simulate(seed, p, path);
    const auto pol = delayed_policy(path, grid, market, driver, weights, theta, quad, options.policy);
    values[p] = policy_objective(pol, grid, market, weights);
    clamped[p] = pol.clamped;
  });

  PerfReport rep;
  const auto st = sample_statistics(values);
  rep.mc_estimate = st.mean;
  rep.mc_stderr = st.std_error;
  rep.n_paths = n_paths;
  rep.n_steps = grid.steps();
  rep.seed = seed;
  rep.theta = theta;
  for (auto c : clamped) rep.clamped_nodes += c;
  rep.market = market;
  rep.weights = weights;
  if (closed_form_applies(market, driver, weights) && theta <= market.T) {
    rep.closed_form_printed =
        closed_form_J_hat(theta, market.mu, market.alpha, market.sigma, market.T, ClosedFormVariant::Printed);
    rep.closed_form_corrected = closed_form_J_hat(theta, market.mu, market.alpha, market.sigma,
                                                  market.T, ClosedFormVariant::Corrected);
  }
  return rep;
}

std::vector<double> simulate_wealth(const SamplePath& path, const TimeGrid& grid,
                                    const PolicyTrajectory& pol, const MarketParams& m,
                                    double epsilon_band) {
  if (!(epsilon_band > 0.0)) throw ArgumentError("simulate_wealth: epsilon_band must be > 0");
  const std::size_t n = grid.steps();
  if (path.brownian.size() != n + 1 || pol.u.size() != n + 1) {
    throw ArgumentError("simulate_wealth: path or policy does not match grid");
  }
  const double dt = grid.dt();
  const double dl = dt / (2.0 * epsilon_band);
  std::vector<double> x(n + 1);
  x[0] = 1.0;
  double log_x = 0.0;
  std::size_t next_jump = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = pol.u[i];
    const double c = pol.c[i];
    double compensator = 0.0;
    for (std::size_t j = 0; j < m.nu.size(); ++j) {
      const double ug = u * m.gamma[j];
      if (!(1.0 + ug > 0.0)) {
        throw DomainError("simulate_wealth: wealth positivity violated (1 + u gamma <= 0)");
      }
      // ln(1+ug) - ug from the Ito correction, minus ln(1+ug) compensating the jump sum.
      compensator += -ug * m.nu[j].lambda;
    }
    log_x += u * m.sigma * (path.brownian[i + 1] - path.brownian[i]);
    log_x += (m.r + (m.mu - m.r) * u - c - 0.5 * m.sigma * m.sigma * u * u + compensator) * dt;
    if (std::abs(path.y[i] - m.y) < epsilon_band) log_x += u * m.alpha * dl;
    const double cell_end = grid.time(i + 1);
    while (next_jump < path.jumps.size() && path.jumps[next_jump].time <= cell_end) {
      log_x += std::log1p(u * m.gamma[path.jumps[next_jump].atom]);
      ++next_jump;
    }
    x[i + 1] = std::exp(log_x);
  }
  return x;
}

double realized_utility(std::span<const double> wealth, const PolicyTrajectory& pol,
                        const TimeGrid& grid, const UtilityWeights& w) {
  double value = w.b * std::log(wealth.back());
  if (w.a > 0.0) {
    std::vector<double> f(wealth.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::log(pol.c[i]) + std::log(wealth[i]);
    value += w.a * trapezoid(f, grid.dt());
  }
  return value;
}

double pre_delay_drift_gap(const MarketParams& market, const DriverSpec& driver,
                           const UtilityWeights& weights, double theta, double lambda0,
                           const QuadConfig& quad) {
  if (!(theta > 0.0 && theta <= market.T)) throw DomainError("pre_delay_drift_gap: theta outside (0, T]");
  const double a = weights.a, b = weights.b, T = market.T;
  const double weighted =
      weighted_expected_local_time(driver, market.nu, market.y, theta, a * T + b, -a, quad);
  const double flat = lambda0 * (b * theta + a * (T * theta - 0.5 * theta * theta));
  return weighted - flat;
}

CrossCheck cross_check_wealth(const MarketParams& market, const DriverSpec& driver,
                              const UtilityWeights& weights, double theta, const TimeGrid& grid,
                              std::size_t n_paths, std::uint64_t seed, double epsilon_band,
                              const QuadConfig& quad, const EvalOptions& options) {
  if (n_paths < 2) throw ArgumentError("cross_check_wealth: need at least two paths");
  const PathSimulator sim(driver, market.nu, grid);
  // u and Lambda are F_0-measurable before theta, so the gap is one number.
  double adjust = 0.0;
  {
    SamplePath path;
    sim.simulate(seed, 0, path);
    const auto pol = delayed_policy(path, grid, market, driver, weights, theta, quad, options.policy);
    if (market.alpha != 0.0 && pol.u[0] != 0.0) {
      adjust = market.alpha * pol.u[0] *
               pre_delay_drift_gap(market, driver, weights, theta, pol.lambda[0], quad);
    }
  }
  std::vector<double> reduced(n_paths), wealth(n_paths), diff(n_paths);
  parallel_for(n_paths, options.threads, [&](std::size_t p) {
    SamplePath path;
    sim.simulate(seed, p, path);
    const auto pol = delayed_policy(path, grid, market, driver, weights, theta, quad, options.policy);
    reduced[p] = policy_objective(pol, grid, market, weights) + adjust;
    const auto x = simulate_wealth(path, grid, pol, market, epsilon_band);
    wealth[p] = realized_utility(x, pol, grid, weights);
    diff[p] = wealth[p] - reduced[p];
  });
  CrossCheck cc;
  cc.reduced = sample_statistics(reduced);
  cc.wealth = sample_statistics(wealth);
  cc.paired = sample_statistics(diff);
  cc.combined_stderr = std::hypot(cc.reduced.std_error, cc.wealth.std_error);
  cc.pre_delay_adjustment = adjust;
  return cc;
}

std::vector<SweepRow> theta_sweep(const MarketParams& market, const DriverSpec& driver,
                                  const UtilityWeights& weights, std::span<const double> thetas,
                                  const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                                  const QuadConfig& quad, const EvalOptions& options) {
  for (double th : thetas) {
    if (!(th > 0.0)) throw ArgumentError("theta_sweep: every theta must be > 0");
  }
  const bool closed = closed_form_applies(market, driver, weights);
  std::vector<SweepRow> rows;
  rows.reserve(thetas.size());
  for (double th : thetas) {
    SweepRow row;
    row.theta = th;
    row.n_paths = n_paths;
    row.seed = seed;
    if (closed && th <= market.T) {
      row.j_printed = closed_form_J_hat(th, market.mu, market.alpha, market.sigma, market.T,
                                      ClosedFormVariant::Printed);
      row.j_corrected = closed_form_J_hat(th, market.mu, market.alpha, market.sigma, market.T,
                                          ClosedFormVariant::Corrected);
    }
    if (n_paths > 0) {
      const auto rep = evaluate_J(market, driver, weights, th, grid, n_paths, seed, quad, options);
      row.j_mc = rep.mc_estimate;
      row.j_mc_stderr = rep.mc_stderr;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  auto opt = [](const std::optional<double>& v) { return v ? csv::real(*v) : std::string(); };
  os << "theta,j_paper,j_corrected,j_mc,j_mc_stderr,n_paths,seed\n";
  for (const auto& r : rows) {
    os << csv::real(r.theta) << ',' << opt(r.j_printed) << ',' << opt(r.j_corrected) << ','
       << opt(r.j_mc) << ',' << opt(r.j_mc_stderr) << ',' << r.n_paths << ',' << r.seed << '\n';
  }
}

}  // namespace sdrift
