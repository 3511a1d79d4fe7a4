#pragma once

#include <stdexcept>
#include <string>

namespace friable {

// Input outside the mathematical domain of an operation (bad window, x out of
// range, d outside an estimate's validity range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A stated hypothesis of an experiment is violated, e.g. a modulus with a
// prime factor >= y'.
class HypothesisError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Work exceeds a configured budget (memory, enumeration size).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace friable
