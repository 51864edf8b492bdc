#pragma once

#include <stdexcept>
#include <string>

namespace sbg {

// Base of every error the library throws. The CLI maps each subclass to a
// distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A game specification (or a belief / vector payoff derived from one) breaks
// one of its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

// The requested horizon would produce more LP variables than allowed.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The LP backend lost precision or could not produce a verified answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Arguments outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbg
