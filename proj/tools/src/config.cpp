#include "sdrift/experiment/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "sdrift/csv.hpp"

namespace sdrift::experiment {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a finite real, got '" + s + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& raw, const std::string& key) {
  std::string s = trim(raw);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    if (!trim(cur).empty()) out.push_back(trim(cur));
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"market", {"r", "mu", "sigma", "alpha", "T", "y"}},
      {"levy", {"atoms"}},
      {"driver", {"phi"}},
      {"weights", {"a", "b"}},
      {"run",
       {"theta", "n_steps", "n_paths", "seed", "epsilon_c", "tail_tolerance", "nodes_per_unit",
        "threads", "clamp", "curvature", "policy_paths", "dump_paths", "local_time_steps"}},
      {"output", {"dir", "svg"}},
  };
  return s;
}

PiecewiseConstant parse_phi(const std::string& text) {
  if (text.find(':') == std::string::npos) return PiecewiseConstant(parse_real(text, "driver.phi"));
  std::vector<double> starts, values;
  for (const auto& piece : split(text, ',')) {
    const auto colon = piece.find(':');
    if (colon == std::string::npos) throw ConfigError("driver.phi: expected start:value pairs");
    starts.push_back(parse_real(piece.substr(0, colon), "driver.phi"));
    values.push_back(parse_real(piece.substr(colon + 1), "driver.phi"));
  }
  try {
    return PiecewiseConstant(std::move(starts), std::move(values));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("driver.phi: ") + e.what());
  }
}

void parse_atoms(const std::string& text, ExperimentConfig& cfg) {
  std::vector<LevyAtom> atoms;
  std::vector<PiecewiseConstant> psi;
  cfg.market.gamma.clear();
  std::size_t j = 0;
  for (const auto& group : split(text, ';')) {
    std::vector<std::string> fields;
    std::istringstream is(group);
    for (std::string f; is >> f;) fields.push_back(f);
    const std::string key = "levy.atoms[" + std::to_string(j) + "]";
    if (fields.size() < 3 || fields.size() > 4) {
      throw ConfigError(key + ": expected 'zeta lambda gamma [psi]'");
    }
    atoms.push_back({parse_real(fields[0], key + ".zeta"), parse_real(fields[1], key + ".lambda")});
    cfg.market.gamma.push_back(parse_real(fields[2], key + ".gamma"));
    psi.emplace_back(fields.size() == 4 ? parse_real(fields[3], key + ".psi") : 0.0);
    ++j;
  }
  cfg.market.nu = LevyMeasure(std::move(atoms));
  cfg.driver.psi = std::move(psi);
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
  std::string norm = text;
  std::replace(norm.begin(), norm.end(), ',', ' ');
  std::vector<double> out;
  std::istringstream is(norm);
  for (std::string tok; is >> tok;) out.push_back(parse_real(tok, key));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, _] : body) {
      if (!it->second.contains(key)) throw ConfigError("unknown key " + section + "." + key);
    }
  }

  ExperimentConfig cfg;
  auto get = [&](const std::string& path) { return tree.get_optional<std::string>(pt::path(path, '.')); };
  auto real = [&](const std::string& path, double& dst) {
    if (auto v = get(path)) dst = parse_real(*v, path);
  };
  auto count = [&](const std::string& path, auto& dst) {
    if (auto v = get(path)) dst = static_cast<std::remove_reference_t<decltype(dst)>>(parse_count(*v, path));
  };
  auto flag = [&](const std::string& path, bool& dst) {
    if (auto v = get(path)) dst = parse_bool(*v, path);
  };

  if (!tree.get_child_optional("market")) throw ConfigError("missing section [market]");
  for (const char* k : {"mu", "sigma", "T"}) {
    if (!get(std::string("market.") + k)) throw ConfigError(std::string("market.") + k + ": required");
  }
  real("market.r", cfg.market.r);
  real("market.mu", cfg.market.mu);
  real("market.sigma", cfg.market.sigma);
  real("market.alpha", cfg.market.alpha);
  real("market.T", cfg.market.T);
  real("market.y", cfg.market.y);

  if (auto v = get("levy.atoms")) parse_atoms(*v, cfg);
  if (auto v = get("driver.phi")) cfg.driver.phi = parse_phi(*v);

  real("weights.a", cfg.weights.a);
  real("weights.b", cfg.weights.b);

  auto& run = cfg.run;
  if (auto v = get("run.theta")) run.thetas = parse_real_list(*v, "run.theta");
  count("run.n_steps", run.n_steps);
  count("run.n_paths", run.n_paths);
  count("run.seed", run.seed);
  real("run.epsilon_c", run.epsilon_c);
  real("run.tail_tolerance", run.quad.tail_tolerance);
  real("run.nodes_per_unit", run.quad.nodes_per_unit);
  count("run.threads", run.threads);
  flag("run.clamp", run.clamp);
  if (auto v = get("run.curvature")) {
    const std::string s = trim(*v);
    if (s == "pointwise") run.curvature = CurvatureForm::Pointwise;
    else if (s == "printed") run.curvature = CurvatureForm::Printed;
    else throw ConfigError("run.curvature: expected pointwise or printed, got '" + s + "'");
  }
  count("run.policy_paths", run.policy_paths);
  flag("run.dump_paths", run.dump_paths);
  if (auto v = get("run.local_time_steps")) {
    run.local_time_steps.clear();
    for (double d : parse_real_list(*v, "run.local_time_steps")) {
      if (!(d >= 1.0) || d != std::floor(d)) throw ConfigError("run.local_time_steps: expected positive integers");
      run.local_time_steps.push_back(static_cast<std::size_t>(d));
    }
  }

  if (auto v = get("output.dir")) cfg.output.dir = trim(*v);
  flag("output.svg", cfg.output.svg);

  if (run.n_steps == 0) throw ConfigError("run.n_steps: must be positive");
  if (!(run.epsilon_c > 0.0)) throw ConfigError("run.epsilon_c: must be > 0");
  try {
    run.quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("run: ") + e.what());
  }
  for (double th : run.thetas) {
    if (!(th > 0.0)) throw ConfigError("run.theta: every value must be > 0");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
  if (o.out) cfg.output.dir = *o.out;
  if (o.seed) cfg.run.seed = *o.seed;
  if (o.paths) cfg.run.n_paths = *o.paths;
  if (o.thetas) {
    for (double th : *o.thetas) {
      if (!(th > 0.0)) throw ConfigError("--theta: every value must be > 0");
    }
    cfg.run.thetas = *o.thetas;
  }
  if (o.svg) cfg.output.svg = true;
}

void write_resolved(std::ostream& os, const ExperimentConfig& cfg) {
  using csv::real;
  auto list = [](const auto& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ", ";
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(xs[i])>>) s += real(xs[i]);
      else s += std::to_string(xs[i]);
    }
    return s;
  };
  const auto& m = cfg.market;
  os << "[market]\n"
     << "r = " << real(m.r) << "\nmu = " << real(m.mu) << "\nsigma = " << real(m.sigma)
     << "\nalpha = " << real(m.alpha) << "\nT = " << real(m.T) << "\ny = " << real(m.y) << "\n\n";
  if (!m.nu.empty()) {
    os << "[levy]\natoms = ";
    for (std::size_t j = 0; j < m.nu.size(); ++j) {
      if (j) os << "; ";
      os << real(m.nu[j].zeta) << ' ' << real(m.nu[j].lambda) << ' '
         << real(j < m.gamma.size() ? m.gamma[j] : 0.0) << ' '
         << real(j < cfg.driver.psi.size() ? cfg.driver.psi[j](0.0) : 0.0);
    }
    os << "\n\n";
  }
  os << "[driver]\nphi = ";
  const auto starts = cfg.driver.phi.starts();
  const auto values = cfg.driver.phi.values();
  if (starts.size() == 1) {
    os << real(values[0]);
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (i) os << ", ";
      os << real(starts[i]) << ':' << real(values[i]);
    }
  }
  os << "\n\n[weights]\na = " << real(cfg.weights.a) << "\nb = " << real(cfg.weights.b) << "\n\n";
  const auto& r = cfg.run;
  os << "[run]\ntheta = " << list(r.thetas) << "\nn_steps = " << r.n_steps
     << "\nn_paths = " << r.n_paths << "\nseed = " << r.seed
     << "\nepsilon_c = " << real(r.epsilon_c) << "\ntail_tolerance = " << real(r.quad.tail_tolerance)
     << "\nnodes_per_unit = " << real(r.quad.nodes_per_unit) << "\nthreads = " << r.threads
     << "\nclamp = " << (r.clamp ? "true" : "false")
     << "\ncurvature = " << (r.curvature == CurvatureForm::Pointwise ? "pointwise" : "printed")
     << "\npolicy_paths = " << r.policy_paths << "\ndump_paths = " << (r.dump_paths ? "true" : "false")
     << "\nlocal_time_steps = " << list(r.local_time_steps) << "\n\n";
  os << "[output]\ndir = " << cfg.output.dir.generic_string()
     << "\nsvg = " << (cfg.output.svg ? "true" : "false") << '\n';
}

}  // namespace sdrift::experiment
