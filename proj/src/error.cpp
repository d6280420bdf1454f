#include "meshplex/error.hpp"

namespace meshplex {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::Argument: return "argument error";
  case ErrorCode::Range: return "range error";
  case ErrorCode::Topology: return "topology error";
  case ErrorCode::Layout: return "layout error";
  case ErrorCode::Format: return "format error";
  case ErrorCode::Integrity: return "integrity error";
  case ErrorCode::Precondition: return "precondition error";
  case ErrorCode::Ambiguity: return "ambiguity error";
  case ErrorCode::Io: return "I/O error";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

} // namespace meshplex
