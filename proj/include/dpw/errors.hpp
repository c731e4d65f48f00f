#pragma once

#include <stdexcept>
#include <string>

namespace dpw {

struct UnsupportedGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NonconvergenceError : std::runtime_error {
  NonconvergenceError(const std::string& what, double last_residual, int iterations)
      : std::runtime_error(what), last_residual(last_residual), iterations(iterations) {}
  double last_residual;
  int iterations;
};

struct SingularJacobianError : std::runtime_error {
  SingularJacobianError(const std::string& what, double rcond, int iteration)
      : std::runtime_error(what), rcond(rcond), iteration(iteration) {}
  double rcond;
  int iteration;
};

struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, double factor, int iteration)
      : std::runtime_error(what), factor(factor), iteration(iteration) {}
  double factor;
  int iteration;
};

struct AsymmetricProfileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dpw
