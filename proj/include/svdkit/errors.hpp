#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svdkit {

/// Violated precondition on an argument (mismatched intervals, bad sizes, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query point or parameter outside the domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A polygonal chain was rejected during validation or restriction.
class ChainRejected : public std::runtime_error {
 public:
  ChainRejected(std::size_t segment, const std::string& reason)
      : std::runtime_error("chain rejected at segment " + std::to_string(segment) + ": " + reason),
        segment_(segment),
        reason_(reason) {}

  std::size_t segment() const noexcept { return segment_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t segment_;
  std::string reason_;
};

/// A mathematical precondition of a theorem-level check does not hold
/// (for instance v^ vanishing inside the working domain).
class PreconditionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction could not be carried out on the given data.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Always a bug.
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace svdkit
