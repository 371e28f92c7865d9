#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdrift/experiment/cli.hpp"
#include "sdrift/experiment/config.hpp"

namespace fs = std::filesystem;
using namespace sdrift::experiment;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sdrift_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_cfg(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p, std::ios::binary) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) v.push_back(cur);
  if (!line.empty() && line.back() == ',') v.emplace_back();
  return v;
}

const char* kBrownian = R"([market]
r = 0
mu = 0.1
sigma = 0.2
alpha = 0.5
T = 1
y = 0

[weights]
a = 0
b = 1

[run]
theta = 0.1, 0.05, 0.025
n_steps = 40
n_paths = 200
seed = 11
local_time_steps = 20, 80
)";

const char* kJumps = R"([market]
r = 0.01
mu = 0.08
sigma = 0.2
alpha = 0.3
T = 1

[levy]
atoms = 1.0 1.0 0.3 0.5; -0.5 2.0 0.1 -0.25

[driver]
phi = 0:1, 0.5:1.5

[weights]
a = 0.5
b = 1

[run]
theta = 0.25
n_steps = 16
n_paths = 60
seed = 3
policy_paths = 2
dump_paths = true
)";

}  // namespace

TEST_CASE("closed-form prints the Merton value when alpha = 0") {
  const auto dir = scratch("closed");
  const auto cfg = write_cfg(dir, "[market]\nmu = 0.1\nsigma = 0.2\nalpha = 0\nT = 1\n[run]\ntheta = 0.5\n");
  const auto r = invoke({"closed-form", cfg.string(), "--out", (dir / "o").string()});
  REQUIRE(r.code == kOk);
  const auto pos = r.out.find("j_corrected = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 14)) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(r.out.find("j_printed") != std::string::npos);
  CHECK(r.out.find("variant gap") != std::string::npos);
  CHECK(fs::exists(dir / "o" / "closed_form.csv"));
  CHECK(fs::exists(dir / "o" / "resolved.cfg"));
}

TEST_CASE("validate names the offending field") {
  const auto dir = scratch("validate");
  const auto bad = write_cfg(dir, "[market]\nmu = 0.1\nsigma = 0\nT = 1\n");
  const auto r = invoke({"validate", bad.string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("sigma") != std::string::npos);

  const auto good = write_cfg(dir, kJumps);
  CHECK(invoke({"validate", "--config", good.string()}).code == kOk);
}

TEST_CASE("config errors exit with 1") {
  const auto dir = scratch("cfgerr");
  CHECK(invoke({"evaluate", (dir / "missing.cfg").string()}).code == kConfigError);
  CHECK(invoke({"evaluate"}).code == kConfigError);
  auto r = invoke({"validate", write_cfg(dir, "[market]\nmu = 0.1\nsigma = 0.2\nT = 1\nvolatility = 3\n").string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("market.volatility") != std::string::npos);
  r = invoke({"validate", write_cfg(dir, "[market]\nmu = abc\nsigma = 0.2\nT = 1\n").string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("market.mu") != std::string::npos);
  r = invoke({"validate", write_cfg(dir, "[market]\nmu = 0.1\nsigma = 0.2\nT = 1\n[levy]\natoms = 1 2\n").string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("levy.atoms[0]") != std::string::npos);
  r = invoke({"validate", write_cfg(dir, "[market]\nmu = 0.1\nsigma = 0.2\n").string()});
  CHECK(r.code == kConfigError);
}

TEST_CASE("unknown subcommand prints usage") {
  const auto r = invoke({"frobnicate"});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("closed-form") != std::string::npos);
  CHECK(invoke({}).code == kConfigError);
}

TEST_CASE("numerical failures exit with 2") {
  const auto dir = scratch("numeric");
  const auto cfg = write_cfg(dir, kBrownian);
  CHECK(invoke({"closed-form", cfg.string(), "--theta", "2", "--out", (dir / "o").string()}).code ==
        kNumericalError);
  const auto hyp = write_cfg(dir, "[market]\nr = 0.05\nmu = 0.01\nsigma = 0.2\nalpha = 0\nT = 1\n[run]\nn_steps = 4\n");
  const auto r = invoke({"policy", hyp.string(), "--out", (dir / "p").string()});
  CHECK(r.code == kNumericalError);
  CHECK(r.err.find("clamp") != std::string::npos);
}

TEST_CASE("sweep writes one row per theta with increasing corrected values") {
  const auto dir = scratch("sweep");
  const auto cfg = write_cfg(dir, kBrownian);
  const auto r = invoke({"sweep", cfg.string(), "--out", (dir / "o").string(), "--paths", "0", "--svg"});
  REQUIRE(r.code == kOk);
  const auto rows = lines(slurp(dir / "o" / "sweep.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "theta,j_paper,j_corrected,j_mc,j_mc_stderr,n_paths,seed");
  double prev = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 7);
    const double j = std::stod(f[2]);
    CHECK(j > prev);
    CHECK(f[3].empty());
    prev = j;
  }
  CHECK(slurp(dir / "o" / "sweep.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("flags override the file") {
  const auto dir = scratch("override");
  const auto cfg = write_cfg(dir, kBrownian);
  REQUIRE(invoke({"closed-form", cfg.string(), "--out", (dir / "o").string(), "--seed", "99",
                  "--paths", "7", "--theta", "0.2,0.3"}).code == kOk);
  const auto resolved = load_config(dir / "o" / "resolved.cfg");
  CHECK(resolved.run.seed == 99);
  CHECK(resolved.run.n_paths == 7);
  CHECK(resolved.run.thetas == std::vector<double>{0.2, 0.3});
  CHECK(resolved.output.dir == dir / "o");
  CHECK(lines(slurp(dir / "o" / "closed_form.csv")).size() == 3);
}

TEST_CASE("resolved configuration round-trips") {
  const auto dir = scratch("roundtrip");
  const auto cfg = load_config(write_cfg(dir, kJumps));
  std::ostringstream a;
  write_resolved(a, cfg);
  std::istringstream in(a.str());
  const auto again = parse_config(in);
  std::ostringstream b;
  write_resolved(b, again);
  CHECK(a.str() == b.str());
  CHECK(again.market.nu.size() == 2);
  CHECK(again.market.gamma == std::vector<double>{0.3, 0.1});
  CHECK(again.driver.psi[1](0.3) == -0.25);
  CHECK(again.driver.phi(0.7) == 1.5);
  CHECK(again.weights.a == 0.5);
}

TEST_CASE("policy dump has one row per node and path") {
  const auto dir = scratch("policy");
  const auto cfg = write_cfg(dir, kJumps);
  const auto r = invoke({"policy", cfg.string(), "--out", (dir / "o").string()});
  REQUIRE(r.code == kOk);
  const auto rows = lines(slurp(dir / "o" / "policy.csv"));
  CHECK(rows.front() == "path_id,t,Lambda,u_star,c_star");
  CHECK(rows.size() == 1 + 2 * 17);
  CHECK(fs::exists(dir / "o" / "paths.csv"));
  CHECK(fs::exists(dir / "o" / "jumps.csv"));
}

TEST_CASE("evaluate and local-time outputs are byte-identical across runs and threads") {
  const auto dir = scratch("determinism");
  const auto base = slurp(write_cfg(dir, kJumps));
  for (const char* sub : {"evaluate", "local-time"}) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "1", "3"}) {
      const auto cfg = dir / (std::string("t") + threads + ".cfg");
      std::ofstream(cfg, std::ios::binary) << base << "threads = " << threads << "\nlocal_time_steps = 10, 40\n";
      const auto out = dir / (std::string(sub) + threads);
      REQUIRE(invoke({sub, cfg.string(), "--out", out.string()}).code == kOk);
      const char* file = std::string(sub) == "evaluate" ? "evaluate.csv" : "local_time.csv";
      outputs.push_back(slurp(out / file));
    }
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0] == outputs[2]);
    CHECK(outputs[0].find('\r') == std::string::npos);
  }
  const auto rows = lines(slurp(dir / "local-time1" / "local_time.csv"));
  CHECK(rows.size() == 3);
}
