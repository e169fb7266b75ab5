#pragma once

#include <stdexcept>
#include <string>

namespace rsde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-domain argument to a numerical routine.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid model, plan or simulation configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Observed data cannot support the requested computation (empty, degenerate).
class DataError : public Error {
 public:
  using Error::Error;
};

/// The model itself is unusable (non-integrable density, degenerate information).
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsde
