#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sdrift/optimal_control.hpp"
#include "test_support.hpp"

using namespace sdrift;

namespace {

RootEquationCoefficients unit_quadratic() {
  // F(u) = u + u / (1 + u): F(u) = 1.5 <=> u^2 + 0.5 u - 1.5 = 0 <=> u = 1.
  return {1.0, 1.0, 1.5, {{1.0, 1.0}}};
}

}  // namespace

TEST_CASE("consumption_star") {
  for (double t : {0.0, 0.4, 1.0}) CHECK(consumption_star(0.0, 1.0, 1.0, t) == 0.0);
  CHECK(consumption_star(1.0, 1.0, 2.0, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(consumption_star(1.0, 1.0, 2.0, 2.0) == 1.0);
  double prev = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double c = consumption_star(0.7, 1.3, 2.0, 0.1 * k);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK_THROWS_AS(consumption_star(1.0, 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(consumption_star(1.0, 1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("root_equation_lhs") {
  CHECK(root_equation_lhs(0.0, unit_quadratic()) == 0.0);
  CHECK(root_equation_lhs(1.0, unit_quadratic()) == 1.5);
  CHECK(root_equation_lhs(3.0, {2.0, 1.0, 0.0, {}}) == 6.0);
  CHECK_THROWS_AS(root_equation_lhs(-1.0, unit_quadratic()), DomainError);
  CHECK_THROWS_AS(root_equation_lhs(-2.0, unit_quadratic()), DomainError);
}

TEST_CASE("root equation is strictly increasing with the analytic derivative") {
  const RootEquationCoefficients k{0.3, 1.7, 0.0, {{0.4, 2.0}, {1.5, 0.3}}};
  double prev = -1.0;
  for (double u = 0.0; u < 20.0; u += 0.37) {
    const double f = root_equation_lhs(u, k);
    CHECK(f > prev);
    prev = f;
    const double h = 1e-6 * std::max(1.0, u);
    const double fd = (root_equation_lhs(u + h, k) - root_equation_lhs(std::max(0.0, u - h), k)) /
                      (u + h - std::max(0.0, u - h));
    CHECK(root_equation_derivative(u, k) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("solve_portfolio_star") {
  CHECK(solve_portfolio_star(unit_quadratic()) == doctest::Approx(1.0).epsilon(1e-13));
  const RootEquationCoefficients linear{0.04, 1.0, 0.1, {}};
  CHECK(solve_portfolio_star(linear) == 0.1 / 0.04);
  auto tiny = unit_quadratic();
  tiny.rhs = 1e-12;
  const double u = solve_portfolio_star(tiny);
  CHECK(u > 0.0);
  CHECK(u < 1e-11);
  auto bad = unit_quadratic();
  bad.rhs = 0.0;
  CHECK_THROWS_AS(solve_portfolio_star(bad), HypothesisViolation);
  bad.rhs = -0.2;
  try {
    solve_portfolio_star(bad);
    FAIL("expected HypothesisViolation");
  } catch (const HypothesisViolation& e) {
    CHECK(e.rhs() == -0.2);
  }
}

TEST_CASE("solver residual and monotonicity on random coefficients") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a(0.01, 3.0), g(0.01, 2.0), l(0.0, 5.0), r(1e-6, 20.0);
  for (int trial = 0; trial < 500; ++trial) {
    RootEquationCoefficients k{a(rng), a(rng), 0.0, {}};
    for (int j = 0; j < 1 + trial % 4; ++j) k.jumps.push_back({g(rng), l(rng)});
    double prev = 0.0;
    std::vector<double> rhs{r(rng), r(rng), r(rng)};
    std::sort(rhs.begin(), rhs.end());
    for (double v : rhs) {
      k.rhs = v;
      const double u = solve_portfolio_star(k);
      CHECK(std::abs(root_equation_lhs(u, k) - v) <= 1e-10);
      CHECK(u > prev);
      prev = u;
    }
  }
}

TEST_CASE("coefficients from market data") {
  auto m = testing::sample_market();
  const UtilityWeights w{0.5, 2.0};
  const auto k = RootEquationCoefficients::at(m, w, 0.25, 0.7);
  CHECK(k.a2 == doctest::Approx(0.5 * 0.75 + 2.0));
  CHECK(k.a1 == doctest::Approx(k.a2 * 0.04));
  CHECK(k.rhs == doctest::Approx(k.a2 * (0.08 - 0.01 + 0.3 * 0.7)));
  REQUIRE(k.jumps.size() == 2);
  CHECK(k.jumps[1].gamma == 0.1);
  CHECK(k.jumps[1].lambda == 2.0);
  const auto printed = RootEquationCoefficients::at(m, w, 0.25, 0.7, CurvatureForm::Printed);
  CHECK(printed.a1 == doctest::Approx(2.5 * 0.04));
  // With a = 0 the two forms agree.
  const auto p0 = RootEquationCoefficients::at(m, {0.0, 1.0}, 0.25, 0.7, CurvatureForm::Printed);
  const auto d0 = RootEquationCoefficients::at(m, {0.0, 1.0}, 0.25, 0.7);
  CHECK(p0.a1 == d0.a1);
}

TEST_CASE("pointwise optimality of (c*, u*)") {
  const auto m = testing::sample_market();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> t_draw(0.0, 1.0), lam(0.0, 2.0), pert(-0.5, 0.5);
  for (const UtilityWeights w : {UtilityWeights{0.0, 1.0}, UtilityWeights{0.8, 1.5}}) {
    for (int trial = 0; trial < 200; ++trial) {
      const double t = t_draw(rng), l = lam(rng);
      const double c_star = consumption_star(w.a, w.b, m.T, t);
      const double u_star = solve_portfolio_star(RootEquationCoefficients::at(m, w, t, l));
      const double best = pointwise_integrand(c_star, u_star, t, l, m, w);
      const double du = pert(rng) * std::max(1.0, u_star);
      const double c = w.a > 0.0 ? c_star * (1.0 + pert(rng)) : std::abs(pert(rng));
      CHECK(best >= pointwise_integrand(c, u_star + du, t, l, m, w) - 1e-12);
    }
  }
}

TEST_CASE("printed curvature form is not the pointwise optimum when a > 0") {
  const auto m = testing::sample_market();
  const UtilityWeights w{1.0, 1.0};
  const double t = 0.0, l = 0.5;  // a (T - t) + b = 2 != a + b only when T - t != 1
  auto m2 = m;
  m2.T = 3.0;
  const double u_p = solve_portfolio_star(RootEquationCoefficients::at(m2, w, t, l, CurvatureForm::Printed));
  const double u_d = solve_portfolio_star(RootEquationCoefficients::at(m2, w, t, l));
  const double c = consumption_star(w.a, w.b, m2.T, t);
  CHECK(pointwise_integrand(c, u_d, t, l, m2, w) > pointwise_integrand(c, u_p, t, l, m2, w));
}

TEST_CASE("delayed policy in the classical Merton case") {
  MarketParams m;
  m.mu = 0.1;
  m.sigma = 0.2;
  m.alpha = 0.0;
  m.T = 1.0;
  const TimeGrid g(1.0, 50);
  const auto path = PathSimulator(DriverSpec::brownian(), m.nu, g).simulate(1, 0);
  const auto pol = delayed_policy(path, g, m, DriverSpec::brownian(), {0.0, 1.0}, 0.1);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    CHECK(pol.u[i] == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(pol.c[i] == 0.0);
  }
}

TEST_CASE("delayed policy for Y = B matches the explicit Brownian-case formulas") {
  const auto m = testing::brownian_case_market(0.1, 0.5, 0.2, 1.0);
  const double theta = 0.2;
  const TimeGrid g(1.0, 100);
  const auto path = PathSimulator(DriverSpec::brownian(), m.nu, g).simulate(4, 2);
  const auto pol = delayed_policy(path, g, m, DriverSpec::brownian(), {0.0, 1.0}, theta);
  const double flat = 1.0 / std::sqrt(2.0 * std::numbers::pi * theta);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    const double t = g.time(i);
    if (t < theta - 1e-12) {
      CHECK(pol.lambda[i] == doctest::Approx(flat).epsilon(1e-14));
      CHECK(pol.info_node[i] == kInitialInformation);
    } else {
      const std::size_t k = i - 20;
      CHECK(pol.info_node[i] == k);
      CHECK(pol.lambda[i] == doctest::Approx(delta_bm_conditional(path.brownian[k], theta)).epsilon(1e-12));
    }
    CHECK(pol.u[i] == doctest::Approx((m.mu + m.alpha * pol.lambda[i]) / (m.sigma * m.sigma)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(delayed_policy(path, g, m, DriverSpec::brownian(), {0.0, 1.0}, 0.0), ArgumentError);
}

TEST_CASE("delayed policy is adapted to the delayed information") {
  const auto m = testing::sample_market();
  const auto d = testing::jump_driver();
  const double theta = 0.25;
  const TimeGrid g(1.0, 40);
  const PathSimulator sim(d, m.nu, g);
  const auto path = sim.simulate(10, 3);
  const UtilityWeights w{0.3, 1.0};
  const auto full = delayed_policy(path, g, m, d, w, theta);
  for (std::size_t cut : {5u, 17u, 30u}) {
    auto truncated = path;
    for (std::size_t i = cut + 1; i < g.nodes(); ++i) {
      truncated.y[i] = 1e3;
      truncated.brownian[i] = -1e3;
    }
    const auto part = delayed_policy(truncated, g, m, d, w, theta);
    for (std::size_t i = 0; i < g.nodes(); ++i) {
      if (full.info_node[i] != kInitialInformation && full.info_node[i] > cut) continue;
      CHECK(part.u[i] == full.u[i]);
      CHECK(part.c[i] == full.c[i]);
      CHECK(part.lambda[i] == full.lambda[i]);
    }
  }
}

TEST_CASE("delayed policy with a jump driver uses the Fourier evaluator") {
  const auto m = testing::sample_market();
  const auto d = testing::jump_driver();
  const double theta = 0.25;
  const TimeGrid g(1.0, 20);
  const auto path = PathSimulator(d, m.nu, g).simulate(10, 4);
  const auto pol = delayed_policy(path, g, m, d, {0.0, 1.0}, theta);
  const std::size_t i = 15, k = 10;
  REQUIRE(pol.info_node[i] == k);
  const auto kernel = ForwardKernel::from_driver(d, m.nu, g.time(k), g.time(i), path.y[k], m.y);
  CHECK(pol.lambda[i] == doctest::Approx(delta_general_conditional(kernel)).epsilon(1e-14));
  for (std::size_t j = 0; j < g.nodes(); ++j) {
    for (double gamma : m.gamma) CHECK(1.0 + pol.u[j] * gamma > 0.0);
    CHECK(pol.c[j] >= 0.0);
  }
}

TEST_CASE("hypothesis failure throws unless clamping is requested") {
  MarketParams m;
  m.r = 0.05;
  m.mu = 0.01;
  m.sigma = 0.2;
  m.alpha = 0.0;
  const TimeGrid g(1.0, 10);
  const auto path = PathSimulator(DriverSpec::brownian(), m.nu, g).simulate(1, 0);
  CHECK_THROWS_AS(delayed_policy(path, g, m, DriverSpec::brownian(), {0.0, 1.0}, 0.1), HypothesisViolation);
  PolicyOptions opt;
  opt.clamp_nonpositive = true;
  const auto pol = delayed_policy(path, g, m, DriverSpec::brownian(), {0.0, 1.0}, 0.1, {}, opt);
  CHECK(pol.clamped == g.nodes());
  for (double u : pol.u) CHECK(u == 0.0);
}

TEST_CASE("policy CSV") {
  PolicyTrajectory p;
  p.path_index = 2;
  p.times = {0.0, 0.5};
  p.lambda = {1.0, 0.25};
  p.u = {2.0, 3.0};
  p.c = {0.0, 0.125};
  std::ostringstream os;
  write_policy_csv(os, p, true);
  CHECK(os.str() == "path_id,t,Lambda,u_star,c_star\n2,0,1,2,0\n2,0.5,0.25,3,0.125\n");
}
