#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdrift/errors.hpp"

namespace sdrift {

/// One point mass of a finite-activity Levy measure: jumps of size `zeta`
/// arriving at rate `lambda` per unit time.
struct LevyAtom {
  double zeta = 0.0;
  double lambda = 0.0;
};

/// Levy measure nu represented as finitely many weighted atoms. Every
/// integral against nu is therefore an exact finite sum.
class LevyMeasure {
 public:
  LevyMeasure() = default;
  explicit LevyMeasure(std::vector<LevyAtom> atoms) : atoms_(std::move(atoms)) {}

  std::span<const LevyAtom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  const LevyAtom& operator[](std::size_t j) const { return atoms_[j]; }

  double total_intensity() const noexcept;
  double second_moment() const noexcept;

 private:
  std::vector<LevyAtom> atoms_;
};

/// Right-continuous piecewise-constant function on [0, inf): piece k holds
/// `values[k]` on [starts[k], starts[k+1]). starts[0] must be 0.
class PiecewiseConstant {
 public:
  PiecewiseConstant() : PiecewiseConstant(0.0) {}
  PiecewiseConstant(double constant);  // NOLINT: implicit from scalar is intended
  PiecewiseConstant(std::vector<double> starts, std::vector<double> values);

  double operator()(double t) const noexcept;
  // Value on the piece immediately to the left of t (t > 0).
  double left_limit(double t) const noexcept;

  double integral(double from, double to) const;
  double integral_of_square(double from, double to) const;

  /// Calls fn(length, value) for each piece intersecting [from, to].
  template <class Fn>
  void for_each_piece(double from, double to, Fn&& fn) const {
    for (std::size_t k = 0; k < values_.size(); ++k) {
      const double lo = std::max(from, starts_[k]);
      const double hi = k + 1 < starts_.size() ? std::min(to, starts_[k + 1]) : to;
      if (hi > lo) fn(hi - lo, values_[k]);
    }
  }

  bool is_constant() const noexcept { return values_.size() == 1; }
  bool is_identically(double v) const noexcept;
  std::span<const double> starts() const noexcept { return starts_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> starts_;
  std::vector<double> values_;
};

/// Coefficients of the bond and the risky asset. `gamma[j]` is the relative
/// jump of the stock at atom j of `nu`.
struct MarketParams {
  double r = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double T = 1.0;
  double y = 0.0;  // local-time level
  std::vector<double> gamma;
  LevyMeasure nu;
};

/// Driver Y(t) = int phi dB + int int psi dN~. `psi[j]` is psi(., zeta_j).
struct DriverSpec {
  PiecewiseConstant phi;
  std::vector<PiecewiseConstant> psi;

  static DriverSpec brownian() { return DriverSpec{PiecewiseConstant(1.0), {}}; }

  double psi_at(std::size_t atom, double t) const noexcept {
    return atom < psi.size() ? psi[atom](t) : 0.0;
  }
  // True when Y has no jump component under nu (so Y is Gaussian).
  bool is_continuous(const LevyMeasure& nu) const noexcept;
  // True when Y coincides with B.
  bool is_brownian(const LevyMeasure& nu) const noexcept;
  // int_from^to phi^2 dr.
  double continuous_variance(double from, double to) const;
  // int_from^to sum_j psi_j^2 lambda_j dr.
  double jump_variance(const LevyMeasure& nu, double from, double to) const;
};

struct UtilityWeights {
  double a = 0.0;  // consumption weight
  double b = 1.0;  // terminal wealth weight
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_market(const MarketParams& params, const DriverSpec& driver);
void validate_weights(const UtilityWeights& weights, ValidationReport& report);

/// Sum_j integrand(zeta_j) * lambda_j. Throws DomainError if the integrand is
/// not finite at some atom.
template <class F>
  requires std::invocable<F&, double>
double levy_integral(const LevyMeasure& nu, F&& integrand) {
  double sum = 0.0;
  for (const auto& atom : nu.atoms()) {
    const double v = integrand(atom.zeta);
    if (!std::isfinite(v)) {
      throw DomainError("levy_integral: integrand is not finite at zeta = " +
                        std::to_string(atom.zeta));
    }
    sum += v * atom.lambda;
  }
  return sum;
}

}  // namespace sdrift
