#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scenery {

enum class ErrorCode {
  invalid_params,
  invalid_radius,
  depth_exceeded,
  zero_mass,
  ambiguous_mass,
  origin_not_in_support,
  precision_loss,
  unsupported_kind,
  config_error,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, const std::string& what,
                    ErrorCode code = ErrorCode::invalid_params) {
  if (!ok) fail(code, what);
}

}  // namespace scenery
