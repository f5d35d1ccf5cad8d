#pragma once

#include <stdexcept>
#include <string>

namespace fdsa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter value lies outside the domain where a family or problem is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested operation needs a capability the family does not have
/// (bounded support, a density bound, a mixture decomposition, ...).
class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

/// A rejection loop exceeded its round limit.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// The envelope of a generalized rejection sampler failed to dominate the density.
class EnvelopeError : public Error {
 public:
  using Error::Error;
};

/// Invalid numeric argument (non-positive step, too few replications, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Regression input that cannot be fitted on a log-log scale.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent experiment or model configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdsa
