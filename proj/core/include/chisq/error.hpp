#pragma once

#include <stdexcept>
#include <string>

namespace chisq {

enum class ErrorKind { validation, numerical, unsupported };

// Every failure carries a stable short code (e.g. "divergent-integral") so
// callers and the CLI can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] void fail_validation(const std::string& code, const std::string& message);
[[noreturn]] void fail_numerical(const std::string& code, const std::string& message);
[[noreturn]] void fail_unsupported(const std::string& code, const std::string& message);

}  // namespace chisq
