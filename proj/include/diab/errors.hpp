#pragma once

#include <stdexcept>
#include <string>

namespace diab {

// Base of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input header/codebook does not match the feature schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Vector/matrix width does not match what a model expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A label class is too small for the requested stratified partition.
class StratificationError : public Error {
 public:
  using Error::Error;
};

// A feature has no observed values to derive a fill value from.
class ImputationError : public Error {
 public:
  using Error::Error;
};

// Training cannot proceed (e.g. single-class input).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Probability calibration failed to converge.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for this model kind.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A required pipeline artifact is missing or malformed.
class ArtifactError : public Error {
 public:
  using Error::Error;
};

}  // namespace diab
