#include "sdrift/local_time.hpp"

#include <cmath>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sdrift/csv.hpp"
#include "sdrift/errors.hpp"
#include "sdrift/parallel.hpp"

namespace sdrift {

double coupled_band_width(const TimeGrid& grid, double coefficient) {
  if (!(coefficient > 0.0)) throw ArgumentError("band width coefficient must be > 0");
  return coefficient * std::sqrt(grid.dt());
}

LocalTimeTrajectory band_occupation_local_time(std::span<const double> y_values,
                                               const TimeGrid& grid, double level,
                                               double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("band_occupation_local_time: epsilon must be > 0");
  if (y_values.size() != grid.nodes()) {
    throw ArgumentError("band_occupation_local_time: path does not match grid");
  }
  const double step = grid.dt() / (2.0 * epsilon);
  LocalTimeTrajectory out;
  out.epsilon = epsilon;
  out.times.resize(grid.nodes());
  out.values.resize(grid.nodes());
  out.values[0] = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    out.times[i] = grid.time(i);
    if (i > 0) {
      if (std::abs(y_values[i - 1] - level) < epsilon) ++hits;
      // hits * step rather than a running sum keeps increments exactly dt/2eps.
      out.values[i] = static_cast<double>(hits) * step;
    }
  }
  return out;
}

LocalTimeTrajectory band_occupation_local_time(const SamplePath& path, const TimeGrid& grid,
                                               double level, double epsilon) {
  return band_occupation_local_time(path.y, grid, level, epsilon);
}

double band_occupation_terminal(std::span<const double> y_values, double dt, double level,
                                double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("band_occupation_terminal: epsilon must be > 0");
  std::size_t hits = 0;
  for (std::size_t k = 0; k + 1 < y_values.size(); ++k) {
    if (std::abs(y_values[k] - level) < epsilon) ++hits;
  }
  return static_cast<double>(hits) * dt / (2.0 * epsilon);
}

double expected_local_time(const DriverSpec& driver, const LevyMeasure& nu, double level,
                           double t, const QuadConfig& quad) {
  return weighted_expected_local_time(driver, nu, level, t, 1.0, 0.0, quad);
}

double weighted_expected_local_time(const DriverSpec& driver, const LevyMeasure& nu, double level,
                                    double t, double intercept, double slope,
                                    const QuadConfig& quad) {
  if (!(t >= 0.0)) throw DomainError("expected_local_time: t must be >= 0");
  if (t == 0.0) return 0.0;
  const bool gaussian = driver.is_continuous(nu);
  auto density = [&](double s) {
    if (gaussian) return delta_gaussian_conditional(-level, driver.continuous_variance(0.0, s));
    return delta_general_conditional(ForwardKernel::from_driver(driver, nu, 0.0, s, 0.0, level),
                                     quad);
  };
  auto integrand = [&](double tau) {
    const double s = tau * tau;
    return 2.0 * tau * (intercept + slope * s) * density(s);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  return GK::integrate(integrand, 0.0, std::sqrt(t), 15, 1e-12);
}

SampleStats band_local_time_mean(const DriverSpec& driver, const LevyMeasure& nu,
                                 const TimeGrid& grid, double level, double epsilon,
                                 std::size_t n_paths, std::uint64_t seed, unsigned threads) {
  if (n_paths == 0) throw ArgumentError("band_local_time_mean: n_paths must be positive");
  if (!(epsilon > 0.0)) throw ArgumentError("band_local_time_mean: epsilon must be > 0");
  const PathSimulator sim(driver, nu, grid);
  std::vector<double> terminal(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t p) {
    SamplePath buf;
    sim.simulate(seed, p, buf);
    terminal[p] = band_occupation_terminal(buf.y, grid.dt(), level, epsilon);
  });
  return sample_statistics(terminal);
}

void write_local_time_csv(std::ostream& os, std::size_t path_id,
                          const LocalTimeTrajectory& traj, bool header) {
  if (header) os << "path_id,t,L\n";
  for (std::size_t i = 0; i < traj.values.size(); ++i) {
    os << path_id << ',' << csv::real(traj.times[i]) << ',' << csv::real(traj.values[i]) << '\n';
  }
}

}  // namespace sdrift
