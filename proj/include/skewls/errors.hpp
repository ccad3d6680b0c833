#pragma once

#include <stdexcept>
#include <string>

namespace skewls {

// Violated input contract (bad sizes, out-of-range indices, malformed data).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// A stated precondition of a lemma does not hold for the given data.
class PreconditionError : public ContractError {
 public:
  explicit PreconditionError(const std::string& what) : ContractError(what) {}
};

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds a simulation size guard.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skewls
