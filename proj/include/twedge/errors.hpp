#pragma once

#include <stdexcept>
#include <string>

namespace twedge {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver exhausted its budget without reaching tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// The population violates the edge regularity gap 1 - lambda_max * c.
class EdgeConditionViolated : public Error {
 public:
  EdgeConditionViolated(const std::string& what, double margin)
      : Error(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// Dense eigendecomposition reported failure.
class EigenFailure : public Error {
 public:
  using Error::Error;
};

/// Onatski ratio undefined: the top three eigenvalues coincide.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class InsufficientSizes : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace twedge
