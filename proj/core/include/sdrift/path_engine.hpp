#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "sdrift/market_model.hpp"

namespace sdrift {

/// Uniform grid t_i = i * T / n_steps, i = 0..n_steps.
class TimeGrid {
 public:
  TimeGrid(double T, std::size_t n_steps);

  double horizon() const noexcept { return T_; }
  std::size_t steps() const noexcept { return n_; }
  std::size_t nodes() const noexcept { return n_ + 1; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t i) const noexcept {
    return i >= n_ ? T_ : static_cast<double>(i) * dt_;
  }
  // Largest node index i with t_i <= t (clamped to [0, n_steps]).
  std::size_t floor_index(double t) const noexcept;

 private:
  double T_;
  std::size_t n_;
  double dt_;
};

struct JumpEvent {
  double time = 0.0;
  std::size_t atom = 0;
};

/// One simulated path: B and Y at grid nodes plus the exact jump events.
struct SamplePath {
  std::uint64_t seed = 0;
  std::size_t index = 0;
  std::vector<double> brownian;
  std::vector<double> y;
  std::vector<JumpEvent> jumps;
};

struct PathEnsemble {
  TimeGrid grid;
  std::uint64_t seed = 0;
  std::vector<SamplePath> paths;
};

/// Engine for path `index` of the stream keyed by `seed`. The state depends
/// only on (seed, index), so paths can be generated in any order.
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t index);

/// Simulates Y = int phi dB + int psi dN~ with Euler steps for the Brownian
/// and compensator parts and exact jump times. A jump at time tau in
/// (t_i, t_{i+1}] contributes psi(t_i, zeta) to Y(t_{i+1}).
class PathSimulator {
 public:
  PathSimulator(const DriverSpec& driver, const LevyMeasure& nu, const TimeGrid& grid);

  const TimeGrid& grid() const noexcept { return grid_; }
  const LevyMeasure& levy() const noexcept { return nu_; }

  // Reuses the buffers of `out`.
  void simulate(std::uint64_t seed, std::size_t index, SamplePath& out) const;
  SamplePath simulate(std::uint64_t seed, std::size_t index) const;

 private:
  TimeGrid grid_;
  LevyMeasure nu_;
  std::vector<double> phi_;                  // phi(t_i)
  std::vector<std::vector<double>> psi_;     // psi_[j][i] = psi_j(t_i)
  std::vector<double> compensator_;          // dt * sum_j psi_j(t_i) lambda_j
  double total_intensity_ = 0.0;
  std::vector<double> atom_weights_;
};

PathEnsemble simulate_paths(const DriverSpec& driver, const LevyMeasure& nu,
                            const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                            unsigned threads = 0);

/// CSV with header path_id,t,B,Y.
void write_paths_csv(std::ostream& os, const PathEnsemble& ensemble);
/// CSV with header path_id,t,zeta.
void write_jumps_csv(std::ostream& os, const PathEnsemble& ensemble, const LevyMeasure& nu);

}  // namespace sdrift
