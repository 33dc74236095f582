#pragma once

#include <stdexcept>
#include <string>

namespace relhdmr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument. `path` names the offending config key
/// when the error originates from a problem file (e.g. "al.r_s").
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::string path = {})
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ModelFitError : public Error {
 public:
  using Error::Error;
};

/// A limit-state or surrogate evaluation produced an unusable value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class StructuralError : public Error {
 public:
  using Error::Error;
};

}  // namespace relhdmr
