#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace crpt {

// Error taxonomy shared by the library, the C API and the CLI exit codes.
enum class errc {
  ok = 0,
  verify_failed = 1,   // a certificate / inequality / scan check failed
  invalid_input = 2,   // malformed or out-of-contract input
  degenerate = 3,      // degenerate or non-generic configuration
  internal = 4,
};

class error : public std::runtime_error {
public:
  error(errc code, std::string reason, const std::string& what)
      : std::runtime_error(what), code_(code), reason_(std::move(reason)) {}

  errc code() const noexcept { return code_; }
  // Short machine-readable id, e.g. "degenerate_A", "non_generic:type_ii".
  const std::string& reason() const noexcept { return reason_; }

private:
  errc code_;
  std::string reason_;
};

[[noreturn]] inline void throw_invalid(const std::string& reason, const std::string& what) {
  throw error(errc::invalid_input, reason, what);
}
[[noreturn]] inline void throw_degenerate(const std::string& reason, const std::string& what) {
  throw error(errc::degenerate, reason, what);
}
[[noreturn]] inline void throw_verify(const std::string& reason, const std::string& what) {
  throw error(errc::verify_failed, reason, what);
}

} // namespace crpt
