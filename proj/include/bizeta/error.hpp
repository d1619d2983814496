#pragma once

#include <stdexcept>
#include <string>

namespace bizeta {

// Broad failure categories. The CLI maps them onto exit codes.
enum class ErrorCategory {
  Validation,  // malformed input or violated precondition
  SizeBound,   // enumeration would exceed the configured bound
  Mismatch,    // two independent routes disagree
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string code, const std::string &message)
      : std::runtime_error(code + ": " + message),
        category_(category),
        code_(std::move(code)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string &code() const noexcept { return code_; }

 private:
  ErrorCategory category_;
  std::string code_;
};

inline Error validation_error(std::string code, const std::string &message) {
  return Error(ErrorCategory::Validation, std::move(code), message);
}

inline Error size_bound_error(const std::string &message) {
  return Error(ErrorCategory::SizeBound, "SizeBound", message);
}

inline Error mismatch_error(std::string code, const std::string &message) {
  return Error(ErrorCategory::Mismatch, std::move(code), message);
}

}  // namespace bizeta
