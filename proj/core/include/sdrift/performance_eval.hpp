#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sdrift/donsker_delta.hpp"
#include "sdrift/market_model.hpp"
#include "sdrift/optimal_control.hpp"
#include "sdrift/path_engine.hpp"
#include "sdrift/statistics.hpp"

namespace sdrift {

enum class ClosedFormVariant { Printed, Corrected };

/// Value of the delayed Brownian-case optimum (a = 0, b = 1, r = 0, Y = B,
/// y = 0, no jumps), A1 + A2 + A3 with
///   A1 = mu^2 T / (2 sigma^2)
///   A2 = (mu alpha / sigma^2) (sqrt(theta / 2pi) + 2 (sqrt T - sqrt theta) / sqrt(2pi))
///   A3 = alpha^2 / (4 pi sigma^2) (1 + (sqrt(2T - theta) - sqrt theta) / sqrt theta).
/// The Printed variant keeps the printed A2, whose first term lacks the
/// mu alpha / sigma^2 factor.
double closed_form_J_hat(double theta, double mu, double alpha, double sigma, double T,
                         ClosedFormVariant variant);

/// Printed minus corrected closed form: sqrt(theta / 2pi) (1 - mu alpha / sigma^2).
double closed_form_variant_gap(double theta, double mu, double alpha, double sigma);

/// True when the market/driver/weights match the setting of closed_form_J_hat.
bool closed_form_applies(const MarketParams& market, const DriverSpec& driver,
                         const UtilityWeights& weights);

/// E[exp(-kappa (Z - y)^2)] for Z ~ N(0, s).
double gaussian_sq_exp_moment(double kappa, double s, double y);

/// E[R_theta^2] with R_theta = E[delta_{B(t)}(y) | F_{t - theta}], 0 < theta <= t.
double second_moment_R(double theta, double t, double y);

struct EvalOptions {
  unsigned threads = 0;
  PolicyOptions policy;
};

struct PerfReport {
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  std::optional<double> closed_form_printed;
  std::optional<double> closed_form_corrected;
  std::size_t n_paths = 0;
  std::size_t n_steps = 0;
  std::uint64_t seed = 0;
  double theta = 0.0;
  std::size_t clamped_nodes = 0;
  MarketParams market;
  UtilityWeights weights;
};

/// Trapezoidal time integral of pointwise_integrand along a policy.
double policy_objective(const PolicyTrajectory& policy, const TimeGrid& grid,
                        const MarketParams& market, const UtilityWeights& weights);

/// Monte Carlo estimate of J along the delayed optimal policy, using the
/// reduced integrand in which dL is replaced by the conditional delta.
PerfReport evaluate_J(const MarketParams& market, const DriverSpec& driver,
                      const UtilityWeights& weights, double theta, const TimeGrid& grid,
                      std::size_t n_paths, std::uint64_t seed, const QuadConfig& quad = {},
                      const EvalOptions& options = {});

/// Wealth X(t_i) from the exponential solution of the wealth equation, with
/// dL replaced by band-estimator increments of half-width `epsilon_band`.
/// X(0) = 1. Throws DomainError if 1 + u gamma_j <= 0 at any node.
std::vector<double> simulate_wealth(const SamplePath& path, const TimeGrid& grid,
                                    const PolicyTrajectory& policy, const MarketParams& market,
                                    double epsilon_band);

/// a * int ln(c X) dt + b ln X(T) for one simulated wealth trajectory.
double realized_utility(std::span<const double> wealth, const PolicyTrajectory& policy,
                        const TimeGrid& grid, const UtilityWeights& weights);

/// int_0^theta (a(T-t)+b) (E[delta_{Y(t)}(y)] - Lambda(0)) dt, where Lambda(0)
/// is the pre-delay value the policy uses on [0, theta). Multiplied by
/// alpha u(0) this is the expected gap between realized local-time drift and
/// the reduced integrand over the pre-delay interval.
double pre_delay_drift_gap(const MarketParams& market, const DriverSpec& driver,
                           const UtilityWeights& weights, double theta, double lambda0,
                           const QuadConfig& quad = {});

struct CrossCheck {
  SampleStats reduced;    // reduced-integrand route, pre-delay gap included
  SampleStats wealth;     // simulated-wealth route
  SampleStats paired;     // per-path difference wealth - reduced
  double combined_stderr = 0.0;
  double pre_delay_adjustment = 0.0;  // alpha u(0) * pre_delay_drift_gap
};

/// Both evaluation routes on the same paths.
CrossCheck cross_check_wealth(const MarketParams& market, const DriverSpec& driver,
                              const UtilityWeights& weights, double theta, const TimeGrid& grid,
                              std::size_t n_paths, std::uint64_t seed, double epsilon_band,
                              const QuadConfig& quad = {}, const EvalOptions& options = {});

struct SweepRow {
  double theta = 0.0;
  std::optional<double> j_printed;
  std::optional<double> j_corrected;
  std::optional<double> j_mc;
  std::optional<double> j_mc_stderr;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

/// One row per theta. Closed forms are present only when closed_form_applies
/// and theta <= T; the Monte Carlo column is skipped when n_paths = 0.
std::vector<SweepRow> theta_sweep(const MarketParams& market, const DriverSpec& driver,
                                  const UtilityWeights& weights, std::span<const double> thetas,
                                  const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                                  const QuadConfig& quad = {}, const EvalOptions& options = {});

/// CSV with header theta,j_paper,j_corrected,j_mc,j_mc_stderr,n_paths,seed.
/// Absent values are written as empty fields.
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

}  // namespace sdrift
