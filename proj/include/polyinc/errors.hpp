#pragma once

#include <stdexcept>
#include <string>

namespace polyinc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested enumeration or table exceeds the configured budget.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Two cyclotomic integers with different root orders were combined.
class IncompatibleOrderError : public Error {
 public:
  using Error::Error;
};

/// A checked 64-bit accumulation overflowed.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// The hypotheses of a theorem are not met by the given input.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Malformed descriptor, configuration or argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace polyinc
