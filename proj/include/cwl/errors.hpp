#pragma once

#include <stdexcept>
#include <string>

namespace cwl {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or violated preconditions.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation landed on a pole. `index` is the pole's position in its
// arithmetic progression (n for Gamma at -n).
class PoleError : public Error {
 public:
  PoleError(const std::string& what, long index, int factor = -1)
      : Error(what), index_(index), factor_(factor) {}
  long index() const noexcept { return index_; }
  // Which Gamma factor of a product hit the pole, -1 when not applicable.
  int factor() const noexcept { return factor_; }

 private:
  long index_;
  int factor_;
};

// A numerical procedure could not meet its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Truncated spectral tail exceeded its budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace cwl
