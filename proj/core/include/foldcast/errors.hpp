#pragma once

#include <stdexcept>
#include <string>

namespace foldcast {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct DivergenceError : Error {
  using Error::Error;
};
struct UnsupportedParams : Error {
  using Error::Error;
};
struct NoSignChange : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct ConstantSignal : Error {
  using Error::Error;
};
struct ZeroSignal : Error {
  using Error::Error;
};
struct OutOfBands : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct MissingClass : Error {
  using Error::Error;
};
struct Incomplete : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

/// File I/O and on-disk format errors.
struct IoError : Error {
  using Error::Error;
};
struct BadMagic : IoError {
  using IoError::IoError;
};
struct VersionMismatch : IoError {
  using IoError::IoError;
};
struct Truncated : IoError {
  using IoError::IoError;
};

}  // namespace foldcast
