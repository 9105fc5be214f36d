#pragma once

#include <stdexcept>
#include <string>

namespace sqss {

// Argument outside the mathematical domain of an operation (e.g. k >= 2^n).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// API misuse: dead slots, shape mismatches, calls out of protocol order.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input that fails a numeric validity check (non-unitary matrix, bad norm).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A party sent a malformed classical message.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reconstruction attempted without every party's share.
class InsufficientShares : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqss
