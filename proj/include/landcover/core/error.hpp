#pragma once

#include <stdexcept>
#include <string>

namespace landcover {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, missing or mutually inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace landcover
