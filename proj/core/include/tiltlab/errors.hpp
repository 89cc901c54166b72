#pragma once

#include <stdexcept>
#include <string>

namespace tiltlab {

// Precondition or parameter-validation failure on user input.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A structural assumption of the asymptotic theory does not hold for the
// supplied model (non-unique maximizer, non-integrable limit measure, ...).
class AssumptionViolated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// E[exp(2 theta g(X))] diverges, so the second-moment ratio is +infinity.
class DivergentMoment : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed external data. Carries the 1-based row number when known.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::size_t row)
      : std::runtime_error(row == 0 ? what : "row " + std::to_string(row) + ": " + what),
        row_(row) {}
  explicit IngestError(const std::string& what) : IngestError(what, 0) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace tiltlab
