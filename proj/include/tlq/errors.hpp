#pragma once

#include <stdexcept>
#include <string>

namespace tlq {

// Categories double as CLI exit codes.
enum class ErrorKind : int {
  input = 2,      // malformed or out-of-range input
  model = 3,      // model invariant violated (inactive node, singular Cb, ...)
  numerical = 4,  // numerical precondition violated (echo window, contour, ...)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(ErrorKind::model, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

}  // namespace tlq
