#pragma once

#include <stdexcept>
#include <string>

namespace sdrift {

// Bad caller input: zero counts, non-positive band widths, and the like.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical argument lies outside the domain of the formula being evaluated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Forward kernel with no Brownian variance but a jump part: the Fourier
// integral is not absolutely convergent and is not evaluated.
class UnsupportedKernelError : public DomainError {
 public:
  using DomainError::DomainError;
};

// mu - r + alpha * E[delta | G_t] <= 0: no positive optimal portfolio exists.
class HypothesisViolation : public DomainError {
 public:
  HypothesisViolation(const std::string& what, double rhs)
      : DomainError(what), rhs_(rhs) {}
  double rhs() const noexcept { return rhs_; }

 private:
  double rhs_;
};

}  // namespace sdrift
