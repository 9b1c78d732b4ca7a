// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_ERRORS_HPP
#define GFPL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gfpl {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numeric integral did not reach the requested tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Iterative solver exhausted its iteration budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

// The two Laplace-inversion methods disagree beyond tolerance.
class InversionError : public Error {
 public:
  using Error::Error;
};

// Operation requested outside the regime where it is defined.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Time step violates the stability bound.
class CflError : public Error {
 public:
  using Error::Error;
};

// A limit quantity was requested before the solution stabilized.
class NotConverged : public Error {
 public:
  using Error::Error;
};

}  // namespace gfpl

#endif  // GFPL_ERRORS_HPP
