#include "sdrift/market_model.hpp"

#include <algorithm>
#include <sstream>

namespace sdrift {

double LevyMeasure::total_intensity() const noexcept {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.lambda;
  return s;
}

double LevyMeasure::second_moment() const noexcept {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.lambda * a.zeta * a.zeta;
  return s;
}

PiecewiseConstant::PiecewiseConstant(double constant) : starts_{0.0}, values_{constant} {}

PiecewiseConstant::PiecewiseConstant(std::vector<double> starts, std::vector<double> values)
    : starts_(std::move(starts)), values_(std::move(values)) {
  if (starts_.empty() || starts_.size() != values_.size()) {
    throw ArgumentError("PiecewiseConstant: need one value per breakpoint");
  }
  if (starts_.front() != 0.0) {
    throw ArgumentError("PiecewiseConstant: first breakpoint must be 0");
  }
  if (std::adjacent_find(starts_.begin(), starts_.end(),
                         [](double a, double b) { return b <= a; }) != starts_.end()) {
    throw ArgumentError("PiecewiseConstant: breakpoints must be strictly increasing");
  }
}

double PiecewiseConstant::operator()(double t) const noexcept {
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  const auto k = it == starts_.begin() ? 0 : std::distance(starts_.begin(), it) - 1;
  return values_[static_cast<std::size_t>(k)];
}

double PiecewiseConstant::left_limit(double t) const noexcept {
  const auto it = std::lower_bound(starts_.begin(), starts_.end(), t);
  const auto k = it == starts_.begin() ? 0 : std::distance(starts_.begin(), it) - 1;
  return values_[static_cast<std::size_t>(k)];
}

double PiecewiseConstant::integral(double from, double to) const {
  double s = 0.0;
  for_each_piece(from, to, [&](double len, double v) { s += len * v; });
  return s;
}

double PiecewiseConstant::integral_of_square(double from, double to) const {
  double s = 0.0;
  for_each_piece(from, to, [&](double len, double v) { s += len * v * v; });
  return s;
}

bool PiecewiseConstant::is_identically(double v) const noexcept {
  return std::all_of(values_.begin(), values_.end(), [v](double x) { return x == v; });
}

bool DriverSpec::is_continuous(const LevyMeasure& nu) const noexcept {
  for (std::size_t j = 0; j < nu.size() && j < psi.size(); ++j) {
    if (!psi[j].is_identically(0.0)) return false;
  }
  return true;
}

bool DriverSpec::is_brownian(const LevyMeasure& nu) const noexcept {
  return is_continuous(nu) && phi.is_identically(1.0);
}

double DriverSpec::continuous_variance(double from, double to) const {
  return phi.integral_of_square(from, to);
}

double DriverSpec::jump_variance(const LevyMeasure& nu, double from, double to) const {
  double s = 0.0;
  for (std::size_t j = 0; j < nu.size() && j < psi.size(); ++j) {
    s += nu[j].lambda * psi[j].integral_of_square(from, to);
  }
  return s;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.field << ": " << v.message << '\n';
  return os.str();
}

namespace {

bool finite_all(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ValidationReport validate_market(const MarketParams& p, const DriverSpec& driver) {
  ValidationReport rep;
  auto fail = [&](std::string field, std::string msg) {
    rep.violations.push_back({std::move(field), std::move(msg)});
  };

  for (auto [name, value] : {std::pair{"r", p.r}, {"mu", p.mu}, {"sigma", p.sigma},
                             {"alpha", p.alpha}, {"T", p.T}, {"y", p.y}}) {
    if (!std::isfinite(value)) fail(name, std::string(name) + " must be finite");
  }
  if (!(p.sigma > 0.0)) fail("sigma", "sigma must be > 0");
  if (!(p.T > 0.0)) fail("T", "horizon T must be > 0");

  if (p.gamma.size() != p.nu.size()) {
    fail("gamma", "need exactly one gamma per Levy atom");
  }
  for (std::size_t j = 0; j < p.nu.size(); ++j) {
    const auto& atom = p.nu[j];
    const std::string tag = "levy.atoms[" + std::to_string(j) + "]";
    if (!std::isfinite(atom.zeta) || atom.zeta == 0.0) {
      fail(tag + ".zeta", "jump size must be nonzero");
    }
    if (!std::isfinite(atom.lambda) || !(atom.lambda > 0.0)) {
      fail(tag + ".lambda", "intensity must be > 0 and finite");
    }
    if (j < p.gamma.size() && (!std::isfinite(p.gamma[j]) || !(p.gamma[j] > 0.0))) {
      fail(tag + ".gamma", "gamma must be > 0");
    }
  }

  if (!finite_all(driver.phi.values())) fail("driver.phi", "phi must be finite");
  if (driver.psi.size() > p.nu.size()) {
    fail("driver.psi", "more psi functions than Levy atoms");
  }
  for (std::size_t j = 0; j < driver.psi.size(); ++j) {
    if (!finite_all(driver.psi[j].values())) {
      fail("driver.psi[" + std::to_string(j) + "]", "psi must be finite");
    }
  }

  // int_t^T {phi^2 + sum psi^2 lambda} ds is non-increasing in t, so it is
  // positive on [0, T) iff the integrand is positive just left of T.
  if (p.T > 0.0 && std::isfinite(p.T)) {
    double rate = driver.phi.left_limit(p.T) * driver.phi.left_limit(p.T);
    for (std::size_t j = 0; j < driver.psi.size() && j < p.nu.size(); ++j) {
      const double v = driver.psi[j].left_limit(p.T);
      rate += v * v * p.nu[j].lambda;
    }
    if (!(rate > 0.0) || !std::isfinite(rate)) {
      fail("driver", "forward variance of Y must be positive and finite on [t, T] for every t < T");
    }
  }
  return rep;
}

void validate_weights(const UtilityWeights& w, ValidationReport& rep) {
  if (!std::isfinite(w.a) || w.a < 0.0) rep.violations.push_back({"a", "a must be >= 0"});
  if (!std::isfinite(w.b) || !(w.b > 0.0)) rep.violations.push_back({"b", "b must be > 0"});
}

}  // namespace sdrift
