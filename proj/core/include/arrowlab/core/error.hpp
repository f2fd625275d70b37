#pragma once

#include <stdexcept>
#include <string>

namespace arrowlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (position outside a
/// box, empty histogram, bad particle index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Checked fixed-point overflow. Never silently wraps.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration / input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace arrowlab
