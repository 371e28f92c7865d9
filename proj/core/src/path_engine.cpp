#include "sdrift/path_engine.hpp"

#include <cmath>
#include <ostream>

#include "sdrift/csv.hpp"
#include "sdrift/errors.hpp"
#include "sdrift/parallel.hpp"

namespace sdrift {

TimeGrid::TimeGrid(double T, std::size_t n_steps) : T_(T), n_(n_steps) {
  if (n_steps == 0) throw ArgumentError("TimeGrid: n_steps must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("TimeGrid: horizon must be > 0");
  dt_ = T / static_cast<double>(n_steps);
}

std::size_t TimeGrid::floor_index(double t) const noexcept {
  if (!(t > 0.0)) return 0;
  // Small slack so that t = k * dt computed in floating point maps to k.
  const double k = std::floor(t / dt_ + 1e-9);
  return k >= static_cast<double>(n_) ? n_ : static_cast<std::size_t>(k);
}

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x5dfa11u};
  return std::mt19937_64(seq);
}

PathSimulator::PathSimulator(const DriverSpec& driver, const LevyMeasure& nu,
                             const TimeGrid& grid)
    : grid_(grid), nu_(nu) {
  const std::size_t n = grid.steps();
  phi_.resize(n);
  compensator_.assign(n, 0.0);
  psi_.assign(nu.size(), std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.time(i);
    phi_[i] = driver.phi(t);
    for (std::size_t j = 0; j < nu.size(); ++j) {
      psi_[j][i] = driver.psi_at(j, t);
      compensator_[i] += grid.dt() * psi_[j][i] * nu[j].lambda;
    }
  }
  total_intensity_ = nu.total_intensity();
  for (const auto& a : nu.atoms()) atom_weights_.push_back(a.lambda);
}

void PathSimulator::simulate(std::uint64_t seed, std::size_t index, SamplePath& out) const {
  const std::size_t n = grid_.steps();
  const double dt = grid_.dt();
  const double T = grid_.horizon();
  auto rng = path_engine(seed, index);

  out.seed = seed;
  out.index = index;
  out.jumps.clear();
  if (total_intensity_ > 0.0) {
    std::exponential_distribution<double> wait(total_intensity_);
    std::discrete_distribution<std::size_t> pick(atom_weights_.begin(), atom_weights_.end());
    for (double tau = wait(rng); tau <= T; tau += wait(rng)) {
      out.jumps.push_back({tau, pick(rng)});
    }
  }

  out.brownian.resize(n + 1);
  out.y.resize(n + 1);
  out.brownian[0] = 0.0;
  out.y[0] = 0.0;
  std::normal_distribution<double> gauss(0.0, std::sqrt(dt));
  std::size_t next_jump = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double db = gauss(rng);
    out.brownian[i + 1] = out.brownian[i] + db;
    double dy = phi_[i] * db - compensator_[i];
    const double cell_end = grid_.time(i + 1);
    while (next_jump < out.jumps.size() && out.jumps[next_jump].time <= cell_end) {
      dy += psi_[out.jumps[next_jump].atom][i];
      ++next_jump;
    }
    out.y[i + 1] = out.y[i] + dy;
  }
}

SamplePath PathSimulator::simulate(std::uint64_t seed, std::size_t index) const {
  SamplePath p;
  simulate(seed, index, p);
  return p;
}

PathEnsemble simulate_paths(const DriverSpec& driver, const LevyMeasure& nu,
                            const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                            unsigned threads) {
  if (n_paths == 0) throw ArgumentError("simulate_paths: n_paths must be positive");
  const PathSimulator sim(driver, nu, grid);
  PathEnsemble ens{grid, seed, std::vector<SamplePath>(n_paths)};
  parallel_for(n_paths, threads, [&](std::size_t p) { sim.simulate(seed, p, ens.paths[p]); });
  return ens;
}

void write_paths_csv(std::ostream& os, const PathEnsemble& ens) {
  os << "path_id,t,B,Y\n";
  for (const auto& p : ens.paths) {
    for (std::size_t i = 0; i < p.brownian.size(); ++i) {
      os << p.index << ',' << csv::real(ens.grid.time(i)) << ',' << csv::real(p.brownian[i])
         << ',' << csv::real(p.y[i]) << '\n';
    }
  }
}

void write_jumps_csv(std::ostream& os, const PathEnsemble& ens, const LevyMeasure& nu) {
  os << "path_id,t,zeta\n";
  for (const auto& p : ens.paths) {
    for (const auto& j : p.jumps) {
      os << p.index << ',' << csv::real(j.time) << ',' << csv::real(nu[j.atom].zeta) << '\n';
    }
  }
}

}  // namespace sdrift
