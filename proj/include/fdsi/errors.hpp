#pragma once

#include <stdexcept>
#include <string>

namespace fdsi {

enum class ErrorCode {
  kConfiguration = 1,
  kDomain,
  kInsufficientData,
  kSingular,
  kInfeasibleTarget,
  kAlignment,
  kIo,
};

/// Base of every error thrown by the library. The C API maps `code()` onto
/// its status enum and forwards `what()` as the last-error message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& message)
      : Error(ErrorCode::kConfiguration, message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorCode::kDomain, message) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& message)
      : Error(ErrorCode::kInsufficientData, message) {}
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& message, double condition_number)
      : Error(ErrorCode::kSingular, message),
        condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

class InfeasibleTargetError : public Error {
 public:
  InfeasibleTargetError(const std::string& message, double best_achievable_db)
      : Error(ErrorCode::kInfeasibleTarget, message),
        best_achievable_db_(best_achievable_db) {}

  /// Largest attenuation reachable under the fixed constraints.
  double best_achievable_db() const noexcept { return best_achievable_db_; }

 private:
  double best_achievable_db_;
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& message)
      : Error(ErrorCode::kAlignment, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCode::kIo, message) {}
};

}  // namespace fdsi
