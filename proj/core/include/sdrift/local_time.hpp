#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sdrift/donsker_delta.hpp"
#include "sdrift/path_engine.hpp"
#include "sdrift/statistics.hpp"

namespace sdrift {

struct LocalTimeTrajectory {
  std::vector<double> times;
  std::vector<double> values;  // L at each grid node; values[0] = 0
  double epsilon = 0.0;
};

/// Band half-width coupled to the grid, eps = coefficient * sqrt(dt).
double coupled_band_width(const TimeGrid& grid, double coefficient = 2.0);

/// L_i = (1/2 eps) * sum_{k<i} dt * 1{ Y(t_k) in (y - eps, y + eps) }.
LocalTimeTrajectory band_occupation_local_time(std::span<const double> y_values,
                                               const TimeGrid& grid, double level,
                                               double epsilon);
LocalTimeTrajectory band_occupation_local_time(const SamplePath& path, const TimeGrid& grid,
                                               double level, double epsilon);

/// Terminal value L_T of the band estimator without materialising the trajectory.
double band_occupation_terminal(std::span<const double> y_values, double dt, double level,
                                double epsilon);

/// int_0^t E[delta_{Y(s)}(y)] ds. The s^{-1/2} singularity at s = 0 is
/// removed by the substitution s = tau^2.
double expected_local_time(const DriverSpec& driver, const LevyMeasure& nu, double level,
                           double t, const QuadConfig& quad = {});

/// int_0^t (intercept + slope s) E[delta_{Y(s)}(y)] ds.
double weighted_expected_local_time(const DriverSpec& driver, const LevyMeasure& nu, double level,
                                    double t, double intercept, double slope,
                                    const QuadConfig& quad = {});

/// Monte Carlo mean of L_T from the band estimator over `n_paths` paths.
SampleStats band_local_time_mean(const DriverSpec& driver, const LevyMeasure& nu,
                                 const TimeGrid& grid, double level, double epsilon,
                                 std::size_t n_paths, std::uint64_t seed, unsigned threads = 0);

/// CSV with header path_id,t,L.
void write_local_time_csv(std::ostream& os, std::size_t path_id,
                          const LocalTimeTrajectory& trajectory, bool header);

}  // namespace sdrift
