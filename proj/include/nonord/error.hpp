#ifndef NONORD_ERROR_HPP
#define NONORD_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonord {

enum class Errc {
  NonInvertible,
  ModulusMismatch,
  LimitTooLarge,
  InvalidDescriptor,
  Overflow,
  IoFailure,
  FormatMismatch,
  ChecksumMismatch,
  BadPrime,
  TableTooShort,
  CapExceeded,
  InvalidN,
  InvalidArgument,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonInvertible: return "NonInvertible";
    case Errc::ModulusMismatch: return "ModulusMismatch";
    case Errc::LimitTooLarge: return "LimitTooLarge";
    case Errc::InvalidDescriptor: return "InvalidDescriptor";
    case Errc::Overflow: return "Overflow";
    case Errc::IoFailure: return "IoFailure";
    case Errc::FormatMismatch: return "FormatMismatch";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::BadPrime: return "BadPrime";
    case Errc::TableTooShort: return "TableTooShort";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::InvalidN: return "InvalidN";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is an Error carrying one of the
/// codes above; callers dispatch on code(), the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nonord

#endif  // NONORD_ERROR_HPP
