#include "chisq/error.hpp"

namespace chisq {

Error::Error(ErrorKind kind, std::string code, const std::string& message)
    : std::runtime_error(code + ": " + message), kind_(kind), code_(std::move(code)) {}

void fail_validation(const std::string& code, const std::string& message) {
  throw Error(ErrorKind::validation, code, message);
}

void fail_numerical(const std::string& code, const std::string& message) {
  throw Error(ErrorKind::numerical, code, message);
}

void fail_unsupported(const std::string& code, const std::string& message) {
  throw Error(ErrorKind::unsupported, code, message);
}

}  // namespace chisq
