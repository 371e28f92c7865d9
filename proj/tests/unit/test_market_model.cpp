#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "sdrift/market_model.hpp"
#include "test_support.hpp"

using namespace sdrift;

namespace {

bool has_violation(const ValidationReport& rep, const std::string& message) {
  for (const auto& v : rep.violations) {
    if (v.message == message) return true;
  }
  return false;
}

MarketParams single_atom_market() {
  MarketParams m;
  m.sigma = 0.2;
  m.T = 1.0;
  m.nu = LevyMeasure({{1.0, 1.0}});
  m.gamma = {1.0};
  return m;
}

}  // namespace

TEST_CASE("validate_market accepts the standing assumptions") {
  const auto rep = validate_market(single_atom_market(), DriverSpec::brownian());
  CHECK(rep.ok());
  CHECK(validate_market(testing::sample_market(), testing::jump_driver()).ok());
}

TEST_CASE("validate_market reports each violated assumption") {
  SUBCASE("sigma = 0") {
    auto m = single_atom_market();
    m.sigma = 0.0;
    const auto rep = validate_market(m, DriverSpec::brownian());
    REQUIRE_FALSE(rep.ok());
    CHECK(has_violation(rep, "sigma must be > 0"));
    CHECK(rep.violations.front().field == "sigma");
  }
  SUBCASE("zero jump size") {
    auto m = single_atom_market();
    m.nu = LevyMeasure({{0.0, 1.0}});
    CHECK(has_violation(validate_market(m, DriverSpec::brownian()), "jump size must be nonzero"));
  }
  SUBCASE("non-positive intensity and gamma") {
    auto m = single_atom_market();
    m.nu = LevyMeasure({{1.0, 0.0}});
    m.gamma = {-1.0};
    const auto rep = validate_market(m, DriverSpec::brownian());
    CHECK(rep.violations.size() == 2);
  }
  SUBCASE("gamma count mismatch") {
    auto m = single_atom_market();
    m.gamma.clear();
    CHECK_FALSE(validate_market(m, DriverSpec::brownian()).ok());
  }
  SUBCASE("T <= 0") {
    auto m = single_atom_market();
    m.T = 0.0;
    CHECK(has_violation(validate_market(m, DriverSpec::brownian()), "horizon T must be > 0"));
  }
  SUBCASE("driver degenerate near T") {
    // phi vanishes on [0.5, T] and there are no jumps in Y.
    DriverSpec d{PiecewiseConstant({0.0, 0.5}, {1.0, 0.0}), {}};
    CHECK_FALSE(validate_market(single_atom_market(), d).ok());
    // ...but jumps of Y keep the forward variance positive.
    d.psi = {PiecewiseConstant(0.3)};
    CHECK(validate_market(single_atom_market(), d).ok());
  }
}

TEST_CASE("levy_integral examples") {
  auto sq = [](double z) { return z * z; };
  CHECK(levy_integral(LevyMeasure({{1.0, 2.0}}), sq) == 2.0);
  CHECK(levy_integral(LevyMeasure(), sq) == 0.0);
  CHECK(levy_integral(LevyMeasure({{1.0, 1.0}, {-0.5, 4.0}}), sq) == 2.0);
  CHECK_THROWS_AS(levy_integral(LevyMeasure({{0.0, 1.0}}), [](double z) { return 1.0 / z; }),
                  DomainError);
  CHECK_THROWS_AS(levy_integral(LevyMeasure({{1.0, 1.0}}),
                                [](double) { return std::numeric_limits<double>::quiet_NaN(); }),
                  DomainError);
}

TEST_CASE("levy_integral is linear and additive over atoms") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> zeta(-2.0, 2.0), rate(0.1, 3.0), coef(-3.0, 3.0);
  auto f = [](double z) { return std::sin(z) + z * z; };
  auto g = [](double z) { return std::exp(-z); };
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LevyAtom> left, right;
    for (int k = 0; k < 3; ++k) left.push_back({zeta(rng), rate(rng)});
    for (int k = 0; k < 4; ++k) right.push_back({zeta(rng), rate(rng)});
    std::vector<LevyAtom> both = left;
    both.insert(both.end(), right.begin(), right.end());
    const LevyMeasure l(left), r(right), b(both);
    const double a = coef(rng), c = coef(rng);
    auto combo = [&](double z) { return a * f(z) + c * g(z); };
    CHECK(levy_integral(b, combo) ==
          doctest::Approx(a * levy_integral(b, f) + c * levy_integral(b, g)).epsilon(1e-12));
    CHECK(levy_integral(b, f) == doctest::Approx(levy_integral(l, f) + levy_integral(r, f)).epsilon(1e-12));
  }
}

TEST_CASE("LevyMeasure moments") {
  const LevyMeasure nu({{1.0, 1.0}, {-0.5, 4.0}});
  CHECK(nu.total_intensity() == 5.0);
  CHECK(nu.second_moment() == 2.0);
}

TEST_CASE("PiecewiseConstant evaluation and integrals") {
  const PiecewiseConstant f({0.0, 0.5, 0.75}, {1.0, 2.0, -1.0});
  CHECK(f(0.0) == 1.0);
  CHECK(f(0.5) == 2.0);
  CHECK(f(0.49) == 1.0);
  CHECK(f(5.0) == -1.0);
  CHECK(f.left_limit(0.5) == 1.0);
  CHECK(f.left_limit(1.0) == -1.0);
  CHECK(f.integral(0.0, 1.0) == doctest::Approx(0.5 + 0.5 - 0.25));
  CHECK(f.integral_of_square(0.25, 1.0) == doctest::Approx(0.25 + 1.0 + 0.25));
  CHECK(PiecewiseConstant(3.0).is_identically(3.0));
  CHECK_THROWS_AS(PiecewiseConstant({0.0, 0.0}, {1.0, 2.0}), ArgumentError);
  CHECK_THROWS_AS(PiecewiseConstant({0.1}, {1.0}), ArgumentError);
  CHECK_THROWS_AS(PiecewiseConstant({0.0, 1.0}, {1.0}), ArgumentError);
}

TEST_CASE("weights validation allows a = 0") {
  ValidationReport rep;
  validate_weights({0.0, 1.0}, rep);
  CHECK(rep.ok());
  validate_weights({-1.0, 0.0}, rep);
  CHECK(rep.violations.size() == 2);
}
