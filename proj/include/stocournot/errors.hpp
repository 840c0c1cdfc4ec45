#pragma once

#include <stdexcept>
#include <string>

namespace stocournot {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: distribution specs, parameters, option values.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A well-formed request evaluated outside the domain of a formula.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A numerical procedure could not produce an answer (no bracket, no interior optimum).
class SolverError : public DomainError {
public:
  using DomainError::DomainError;
};

}  // namespace stocournot
