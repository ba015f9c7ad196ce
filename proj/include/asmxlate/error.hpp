#pragma once

#include <stdexcept>
#include <string>

namespace asmxlate {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid configuration. `field()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The harness itself cannot proceed: a tool is missing, a fixture is
/// broken, a temp dir cannot be created. Distinct from candidate failures.
class InfrastructureError : public Error {
 public:
  using Error::Error;
};

/// A required executable could not be started.
class ToolNotFound : public InfrastructureError {
 public:
  explicit ToolNotFound(std::string command)
      : InfrastructureError("cannot execute: " + command), command_(std::move(command)) {}

  const std::string& command() const noexcept { return command_; }

 private:
  std::string command_;
};

}  // namespace asmxlate
