#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdrift/donsker_delta.hpp"
#include "sdrift/market_model.hpp"
#include "sdrift/optimal_control.hpp"

namespace sdrift::experiment {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSection {
  std::vector<double> thetas{0.1};
  std::size_t n_steps = 1000;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  double epsilon_c = 2.0;
  QuadConfig quad;
  unsigned threads = 0;
  bool clamp = false;
  CurvatureForm curvature = CurvatureForm::Pointwise;
  std::size_t policy_paths = 1;
  bool dump_paths = false;
  std::vector<std::size_t> local_time_steps{100, 1000, 10000};
};

struct OutputSection {
  std::filesystem::path dir = "out";
  bool svg = false;
};

struct ExperimentConfig {
  MarketParams market;
  DriverSpec driver = DriverSpec::brownian();
  UtilityWeights weights;
  RunSection run;
  OutputSection output;
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::vector<double>> thetas;
  bool svg = false;
};

/// Parses an INI file. Throws ConfigError naming the offending key.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::istream& in);

void apply_overrides(ExperimentConfig& cfg, const Overrides& o);

/// Comma- or space-separated list of finite reals.
std::vector<double> parse_real_list(const std::string& text, const std::string& key);

/// Effective configuration in the same INI dialect, readable by load_config.
void write_resolved(std::ostream& os, const ExperimentConfig& cfg);

}  // namespace sdrift::experiment
