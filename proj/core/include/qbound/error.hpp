#pragma once

#include <stdexcept>
#include <string>

namespace qbound {

/// A state parameter or radius outside the region where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid input to a constructor (non-Hermitian matrix, malformed table, ...).
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical integrand produced a non-finite sample.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double abscissa)
      : std::runtime_error(what), abscissa_(abscissa) {}

  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// A measurement or density failed a validity requirement (negative density, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qbound
