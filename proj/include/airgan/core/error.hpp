#pragma once

#include <stdexcept>
#include <string>

namespace airgan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Numerically degenerate input: silent signals, flat decays, singular systems.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// An error raised inside one stage of a multi-stage operation (e.g. encode).
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace airgan
