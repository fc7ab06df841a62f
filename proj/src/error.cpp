#include "tgsd/error.hpp"

namespace tgsd {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::DisconnectedInput: return "DisconnectedInput";
    case Errc::TooSmall: return "TooSmall";
    case Errc::GMaxTooLarge: return "GMaxTooLarge";
    case Errc::InsufficientBasis: return "InsufficientBasis";
    case Errc::AsymmetricInput: return "AsymmetricInput";
    case Errc::NonPositiveRho: return "NonPositiveRho";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NonFinite: return "NonFinite";
    case Errc::EmptyMask: return "EmptyMask";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::WrongDictionaryKind: return "WrongDictionaryKind";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::TypeError: return "TypeError";
    case Errc::RangeError: return "RangeError";
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::MaskShapeMismatch: return "MaskShapeMismatch";
    case Errc::NaNUnderObservedMask: return "NaNUnderObservedMask";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

ErrorClass classify(Errc code) noexcept {
  switch (code) {
    case Errc::UnknownKey:
    case Errc::TypeError:
    case Errc::RangeError:
    case Errc::GMaxTooLarge:
    case Errc::InsufficientBasis:
    case Errc::KTooLarge:
    case Errc::NonPositiveRho:
    case Errc::WrongDictionaryKind:
      return ErrorClass::Config;
    case Errc::NonFinite:
    case Errc::AsymmetricInput:
      return ErrorClass::Numeric;
    default:
      return ErrorClass::Data;
  }
}

}  // namespace tgsd
