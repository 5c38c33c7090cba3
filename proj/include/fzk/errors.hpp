#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fzk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class ResolutionMismatch : public Error {
 public:
  using Error::Error;
};

class WorkspaceMismatch : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class OracleSizeExceeded : public Error {
 public:
  using Error::Error;
};

class ZeroFieldError : public Error {
 public:
  using Error::Error;
};

class NonDoublingSequence : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Raised when the solution stops being finite. Carries the step index and
/// the time at which the step started.
class NanDetected : public Error {
 public:
  NanDetected(std::size_t step_index, double time)
      : Error("non-finite coefficient after step " + std::to_string(step_index) +
              " (t = " + std::to_string(time) + ")"),
        step_index_(step_index),
        time_(time) {}

  std::size_t step_index() const noexcept { return step_index_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_index_;
  double time_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& what)
      : Error("invalid value for '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class CorruptFile : public Error {
 public:
  using Error::Error;
};

}  // namespace fzk
