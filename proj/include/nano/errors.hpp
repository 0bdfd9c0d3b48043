#pragma once

#include <stdexcept>
#include <string>

namespace nano {

// Base of every library-specific failure. Callers that only care whether a
// filter step succeeded can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Cholesky pivot fell at or below the relative threshold.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// Covariance iterate of a NANO update lost positive definiteness.
class PDFailure : public NotPositiveDefinite {
 public:
  using NotPositiveDefinite::NotPositiveDefinite;
};

class NonFiniteFunctionValue : public Error {
 public:
  using Error::Error;
};

class NonFiniteIterate : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class SingularFactor : public Error {
 public:
  using Error::Error;
};

class GimbalLock : public Error {
 public:
  using Error::Error;
};

class MissingHessian : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Everything below is a caller/configuration mistake; the CLI maps these to
// exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ModelNotLinear : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownScenario : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownLevel : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace nano
