#pragma once

#include <stdexcept>
#include <string>

namespace meshplex {

/// Failure categories shared by every module. The numeric values are
/// mirrored by the C status codes in meshplex.h.
enum class ErrorCode : int {
  Argument = 1,
  Range = 2,
  Topology = 3,
  Layout = 4,
  Format = 5,
  Integrity = 6,
  Precondition = 7,
  Ambiguity = 8,
  Io = 9,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

} // namespace meshplex
