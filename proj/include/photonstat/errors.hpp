#pragma once

#include <stdexcept>
#include <string>

namespace photonstat {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds a configured evaluation cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Input violates a physical constraint (e.g. density-matrix positivity).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Normalization against a vanishing intensity was requested.
class ZeroIntensityError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario configuration; `path` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace photonstat
