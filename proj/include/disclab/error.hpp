#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace disclab {

enum class ErrorKind {
  invalid_argument,
  unsupported_exponent,
  degenerate_weight,
  solver_failure,
  domain_error,
  integration_failure,
  numerical_inconsistency,
  size_limit,
  io_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when the optimal-density root finder cannot reach its residual
/// target. Carries the grid abscissa that failed.
class SolverFailure : public Error {
 public:
  SolverFailure(double t, const std::string& what)
      : Error(ErrorKind::solver_failure, what), t_(t) {}

  double t() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace disclab
