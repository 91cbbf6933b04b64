#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace susy {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a special function (poles, z <= 0 for U, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid model parameters, or a model without bound states.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Node certification could not separate a near-zero minimum from a true node.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// A chain step could not be built. Carries the offending step.
class ChainError : public Error {
 public:
  ChainError(const std::string& what, std::size_t step, double epsilon, double nu)
      : Error(what), step_(step), epsilon_(epsilon), nu_(nu) {}

  std::size_t step() const noexcept { return step_; }
  double epsilon() const noexcept { return epsilon_; }
  double nu() const noexcept { return nu_; }

 private:
  std::size_t step_;
  double epsilon_;
  double nu_;
};

/// Evaluation hit a zero of a transformation function.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// The ground state 1/u of a chain level is not square integrable.
class NonNormalizableError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver exceeded its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Two sampled fields do not share a grid.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace susy
