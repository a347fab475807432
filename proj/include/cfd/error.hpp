#pragma once

#include <stdexcept>
#include <string>

namespace cfd {

enum class ErrorKind {
  InvalidInput,
  NotPrime,
  NotIrreducible,
  NonSplitModulus,
  NotAUnit,
  SizeLimit,
  InternalInvariant,
  NotReducible,
  DTSquared,
  NegativePower,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NonSplitModulus: return "NonSplitModulus";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::InternalInvariant: return "InternalInvariant";
    case ErrorKind::NotReducible: return "NotReducible";
    case ErrorKind::DTSquared: return "DTSquared";
    case ErrorKind::NegativePower: return "NegativePower";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cfd
