#pragma once

#include <stdexcept>
#include <string>

namespace kobdyn {

// Base class for every failure the toolkit can report.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point lies outside the domain it is supposed to live in.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The requested operation is not implemented for this domain kind.
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

// A map claimed to be a self-map sent a point outside the domain.
class SelfMapViolation : public Error {
 public:
  using Error::Error;
};

// No preimage was found within the configured budget.
class NoPreimageError : public Error {
 public:
  using Error::Error;
};

// Every admissible preimage violates the step bound a_max.
class BoundedStepError : public Error {
 public:
  using Error::Error;
};

// The backward construction found fixed-point candidates piling up on the
// boundary inside the isolation window.
class IsolationViolation : public Error {
 public:
  using Error::Error;
};

// The classifier ran out of budget or met contradictory evidence.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

// A limit estimator failed to converge; carries the partial value it had.
class EstimationError : public Error {
 public:
  EstimationError(const std::string& msg, double partial, double error)
      : Error(msg), partial_value(partial), error_estimate(error) {}
  double partial_value;
  double error_estimate;
};

// Malformed configuration input; `pointer` locates the offending field.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg, std::string ptr = "")
      : Error(msg), pointer(std::move(ptr)) {}
  std::string pointer;
};

}  // namespace kobdyn
