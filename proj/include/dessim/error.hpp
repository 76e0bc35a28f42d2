#pragma once

#include <stdexcept>
#include <string>

namespace dessim {

// Base of every error raised by the library. kind() is a short stable tag
// used by the CLI for machine-parsable error lines.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

// Invalid simulation configuration (no trace files, bad timeout, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

// Input data violating a precondition (non-monotone schedule, empty sample).
class InputError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "input"; }
};

// Out-of-range numeric parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parameter"; }
};

// Malformed file content.
class FormatError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "format"; }
};

// Zero-variance sample where skewness/kurtosis are undefined.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate-sample"; }
};

}  // namespace dessim
