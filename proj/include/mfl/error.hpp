#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfl {

enum class Errc {
  InvalidInstance,
  InvalidParams,
  IndexOutOfRange,
  UnsupportedLevelCount,
  IneligibleMove,
  InadmissibleMove,
  ConstructionFailed,
  IncompleteMatrix,
  LengthMismatch,
  Io,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidInstance: return "InvalidInstance";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::UnsupportedLevelCount: return "UnsupportedLevelCount";
    case Errc::IneligibleMove: return "IneligibleMove";
    case Errc::InadmissibleMove: return "InadmissibleMove";
    case Errc::ConstructionFailed: return "ConstructionFailed";
    case Errc::IncompleteMatrix: return "IncompleteMatrix";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mfl
