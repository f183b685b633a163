#pragma once

#include <stdexcept>
#include <string>

namespace cloudgan {

// Error families map one-to-one onto CLI exit codes (see tools/cloudgan.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, flags or arguments (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Tensor/raster shapes that do not line up.
class ShapeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Dataset files or directories that are missing or unusable (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss or model output (exit code 4).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing files failed (exit code 5).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cloudgan
