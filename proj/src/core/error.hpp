#pragma once

#include <stdexcept>
#include <string>

namespace dsp {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  Io,
  NoPath,
  NotMember,
  BoundExceeded,
  Unsupported,
};

// Single exception type for the core; the C API maps `code()` onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dsp
