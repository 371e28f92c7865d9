#include "sdrift/experiment/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <ostream>

#include "sdrift/csv.hpp"
#include "sdrift/errors.hpp"
#include "sdrift/experiment/config.hpp"
#include "sdrift/experiment/svg.hpp"
#include "sdrift/local_time.hpp"
#include "sdrift/path_engine.hpp"
#include "sdrift/performance_eval.hpp"

namespace sdrift::experiment {

namespace {

namespace fs = std::filesystem;
using csv::real;

struct Invocation {
  std::string positional;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  std::string thetas;
  bool svg = false;
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  body(os);
  if (!os) throw ConfigError("write failed for '" + path.string() + "'");
}

EvalOptions eval_options(const ExperimentConfig& cfg) {
  EvalOptions o;
  o.threads = cfg.run.threads;
  o.policy.form = cfg.run.curvature;
  o.policy.clamp_nonpositive = cfg.run.clamp;
  return o;
}

void check_model(const ExperimentConfig& cfg) {
  ValidationReport rep = validate_market(cfg.market, cfg.driver);
  validate_weights(cfg.weights, rep);
  if (!rep.ok()) throw ConfigError(rep.to_string());
}

fs::path prepare_output(const ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output.dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.output.dir.string() + "'");
  write_file(cfg.output.dir / "resolved.cfg", [&](std::ostream& os) { write_resolved(os, cfg); });
  return cfg.output.dir;
}

int cmd_validate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  ValidationReport rep = validate_market(cfg.market, cfg.driver);
  validate_weights(cfg.weights, rep);
  if (!rep.ok()) {
    err << "invalid configuration:\n" << rep.to_string() << '\n';
    return kConfigError;
  }
  out << "configuration is valid\n";
  return kOk;
}

int cmd_policy(const ExperimentConfig& cfg, std::ostream& out) {
  check_model(cfg);
  const fs::path dir = prepare_output(cfg);
  const TimeGrid grid(cfg.market.T, cfg.run.n_steps);
  const double theta = cfg.run.thetas.front();
  const auto ens = simulate_paths(cfg.driver, cfg.market.nu, grid, std::max<std::size_t>(cfg.run.policy_paths, 1),
                                  cfg.run.seed, cfg.run.threads);
  const auto opts = eval_options(cfg).policy;
  std::size_t clamped = 0;
  write_file(dir / "policy.csv", [&](std::ostream& os) {
    bool header = true;
    for (const auto& path : ens.paths) {
      const auto pol = delayed_policy(path, grid, cfg.market, cfg.driver, cfg.weights, theta, cfg.run.quad, opts);
      clamped += pol.clamped;
      write_policy_csv(os, pol, header);
      header = false;
    }
  });
  if (cfg.run.dump_paths) {
    write_file(dir / "paths.csv", [&](std::ostream& os) { write_paths_csv(os, ens); });
    write_file(dir / "jumps.csv", [&](std::ostream& os) { write_jumps_csv(os, ens, cfg.market.nu); });
  }
  out << "theta = " << real(theta) << ", paths = " << ens.paths.size() << ", nodes = " << grid.nodes()
      << ", clamped nodes = " << clamped << '\n'
      << "wrote " << (dir / "policy.csv").generic_string() << '\n';
  return kOk;
}

int cmd_evaluate(const ExperimentConfig& cfg, std::ostream& out) {
  check_model(cfg);
  const fs::path dir = prepare_output(cfg);
  if (cfg.run.n_paths == 0) throw ConfigError("run.n_paths: evaluate needs at least one path");
  const TimeGrid grid(cfg.market.T, cfg.run.n_steps);
  std::vector<PerfReport> reports;
  for (double theta : cfg.run.thetas) {
    reports.push_back(evaluate_J(cfg.market, cfg.driver, cfg.weights, theta, grid, cfg.run.n_paths,
                                 cfg.run.seed, cfg.run.quad, eval_options(cfg)));
  }
  auto opt = [](const std::optional<double>& v) { return v ? real(*v) : std::string(); };
  write_file(dir / "evaluate.csv", [&](std::ostream& os) {
    os << "theta,mc_estimate,mc_stderr,j_printed,j_corrected,n_paths,n_steps,seed,clamped_nodes\n";
    for (const auto& r : reports) {
      os << real(r.theta) << ',' << real(r.mc_estimate) << ',' << real(r.mc_stderr) << ','
         << opt(r.closed_form_printed) << ',' << opt(r.closed_form_corrected) << ',' << r.n_paths << ','
         << r.n_steps << ',' << r.seed << ',' << r.clamped_nodes << '\n';
    }
  });
  for (const auto& r : reports) {
    out << "theta = " << real(r.theta) << ": J = " << real(r.mc_estimate) << " +- " << real(r.mc_stderr);
    if (r.closed_form_corrected) out << " (closed form corrected " << real(*r.closed_form_corrected) << ')';
    if (r.clamped_nodes) out << " [" << r.clamped_nodes << " clamped nodes]";
    out << '\n';
  }
  return kOk;
}

int cmd_closed_form(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  check_model(cfg);
  const fs::path dir = prepare_output(cfg);
  const auto& m = cfg.market;
  if (!closed_form_applies(m, cfg.driver, cfg.weights)) {
    err << "warning: the closed form assumes a = 0, b = 1, r = 0, y = 0, no jumps and phi = 1; "
           "values below use only mu, alpha, sigma and T\n";
  }
  struct Row { double theta, corrected, printed, gap; };
  std::vector<Row> rows;
  for (double theta : cfg.run.thetas) {
    rows.push_back({theta,
                    closed_form_J_hat(theta, m.mu, m.alpha, m.sigma, m.T, ClosedFormVariant::Corrected),
                    closed_form_J_hat(theta, m.mu, m.alpha, m.sigma, m.T, ClosedFormVariant::Printed),
                    closed_form_variant_gap(theta, m.mu, m.alpha, m.sigma)});
  }
  write_file(dir / "closed_form.csv", [&](std::ostream& os) {
    os << "theta,j_corrected,j_printed,variant_gap\n";
    for (const auto& r : rows) {
      os << real(r.theta) << ',' << real(r.corrected) << ',' << real(r.printed) << ',' << real(r.gap) << '\n';
    }
  });
  for (const auto& r : rows) {
    out << "theta = " << real(r.theta) << "\n  j_corrected = " << real(r.corrected)
        << "\n  j_printed   = " << real(r.printed) << "\n  variant gap = " << real(r.gap) << '\n';
  }
  return kOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  check_model(cfg);
  const fs::path dir = prepare_output(cfg);
  const TimeGrid grid(cfg.market.T, cfg.run.n_steps);
  const auto rows = theta_sweep(cfg.market, cfg.driver, cfg.weights, cfg.run.thetas, grid,
                                cfg.run.n_paths, cfg.run.seed, cfg.run.quad, eval_options(cfg));
  write_file(dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, rows); });
  if (cfg.output.svg) {
    std::vector<Series> series(3);
    series[0].name = "corrected";
    series[1].name = "printed";
    series[2].name = "Monte Carlo";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows) {
      for (auto& s : series) s.x.push_back(r.theta);
      series[0].y.push_back(r.j_corrected.value_or(nan));
      series[1].y.push_back(r.j_printed.value_or(nan));
      series[2].y.push_back(r.j_mc.value_or(nan));
    }
    write_file(dir / "sweep.svg", [&](std::ostream& os) {
      write_line_chart(os, {"Value of the delayed optimum", "delay theta", "J", true}, series);
    });
  }
  for (const auto& r : rows) {
    out << "theta = " << real(r.theta);
    if (r.j_corrected) out << "  corrected = " << real(*r.j_corrected) << "  printed = " << real(*r.j_printed);
    if (r.j_mc) out << "  mc = " << real(*r.j_mc) << " +- " << real(*r.j_mc_stderr);
    out << '\n';
  }
  return kOk;
}

int cmd_local_time(const ExperimentConfig& cfg, std::ostream& out) {
  check_model(cfg);
  const fs::path dir = prepare_output(cfg);
  if (cfg.run.n_paths == 0) throw ConfigError("run.n_paths: local-time needs at least one path");
  const auto& m = cfg.market;
  const double expected = expected_local_time(cfg.driver, m.nu, m.y, m.T, cfg.run.quad);
  struct Row { std::size_t n; double dt, eps; SampleStats st; };
  std::vector<Row> rows;
  for (std::size_t n : cfg.run.local_time_steps) {
    const TimeGrid grid(m.T, n);
    const double eps = coupled_band_width(grid, cfg.run.epsilon_c);
    rows.push_back({n, grid.dt(), eps,
                    band_local_time_mean(cfg.driver, m.nu, grid, m.y, eps, cfg.run.n_paths, cfg.run.seed,
                                         cfg.run.threads)});
  }
  write_file(dir / "local_time.csv", [&](std::ostream& os) {
    os << "n_steps,dt,epsilon,mc_mean,mc_stderr,expected,rel_error\n";
    for (const auto& r : rows) {
      os << r.n << ',' << real(r.dt) << ',' << real(r.eps) << ',' << real(r.st.mean) << ','
         << real(r.st.std_error) << ',' << real(expected) << ',' << real((r.st.mean - expected) / expected)
         << '\n';
    }
  });
  const std::size_t finest = *std::max_element(cfg.run.local_time_steps.begin(), cfg.run.local_time_steps.end());
  const TimeGrid fine(m.T, finest);
  const auto path = PathSimulator(cfg.driver, m.nu, fine).simulate(cfg.run.seed, 0);
  const auto traj = band_occupation_local_time(path, fine, m.y, coupled_band_width(fine, cfg.run.epsilon_c));
  write_file(dir / "local_time_path.csv", [&](std::ostream& os) { write_local_time_csv(os, 0, traj, true); });
  if (cfg.output.svg) {
    std::vector<Series> series(2);
    series[0].name = "band estimator";
    series[1].name = "expected";
    for (const auto& r : rows) {
      series[0].x.push_back(r.dt);
      series[0].y.push_back(r.st.mean);
      series[1].x.push_back(r.dt);
      series[1].y.push_back(expected);
    }
    write_file(dir / "local_time.svg", [&](std::ostream& os) {
      write_line_chart(os, {"Local time at the level, horizon T", "dt", "E[L_T]", true}, series);
    });
  }
  out << "expected L_T = " << real(expected) << '\n';
  for (const auto& r : rows) {
    out << "n_steps = " << r.n << ": " << real(r.st.mean) << " +- " << real(r.st.std_error) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delayed-information portfolio experiments", "sdrift"};
  app.require_subcommand(1);
  Invocation inv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config_file", inv.positional, "INI configuration file");
    sub->add_option("--config", inv.config, "INI configuration file");
    sub->add_option("--out", inv.out, "output directory");
    sub->add_option("--seed", inv.seed, "master seed");
    sub->add_option("--paths", inv.paths, "number of Monte Carlo paths");
    sub->add_option("--theta", inv.thetas, "comma-separated delays");
    sub->add_flag("--svg", inv.svg, "emit SVG charts");
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "check a configuration"},
      {"policy", "dump delayed optimal policy trajectories"},
      {"evaluate", "Monte Carlo value of the delayed optimum"},
      {"closed-form", "closed-form value in the Brownian case"},
      {"sweep", "value across a list of delays"},
      {"local-time", "band estimator convergence table"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    if (!inv.positional.empty() && !inv.config.empty() && inv.positional != inv.config) {
      throw ConfigError("give the configuration either positionally or with --config, not both");
    }
    const std::string path = inv.config.empty() ? inv.positional : inv.config;
    if (path.empty()) throw ConfigError("no configuration file given");
    ExperimentConfig cfg = load_config(path);
    Overrides o;
    if (sub->count("--out")) o.out = inv.out;
    if (sub->count("--seed")) o.seed = inv.seed;
    if (sub->count("--paths")) o.paths = inv.paths;
    if (sub->count("--theta")) o.thetas = parse_real_list(inv.thetas, "--theta");
    o.svg = inv.svg;
    apply_overrides(cfg, o);

    const std::string& name = sub->get_name();
    if (name == "validate") return cmd_validate(cfg, out, err);
    if (name == "policy") return cmd_policy(cfg, out);
    if (name == "evaluate") return cmd_evaluate(cfg, out);
    if (name == "closed-form") return cmd_closed_form(cfg, out, err);
    if (name == "sweep") return cmd_sweep(cfg, out);
    return cmd_local_time(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const HypothesisViolation& e) {
    err << "numerical error: " << e.what() << " (set run.clamp = true to clamp u* to 0)\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace sdrift::experiment
