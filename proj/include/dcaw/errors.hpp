#pragma once

#include <stdexcept>
#include <string>

namespace dcaw {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value left the configured magnitude cap.
class OverflowError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input exceeds a desk-scale enumeration limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// An internal invariant failed; indicates corrupted input or a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class InfeasibleStartError : public Error {
 public:
  using Error::Error;
};

// Descent ran past its safety iteration cap.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class UnboundedDirectionError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

class InfeasibleDualError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dcaw
