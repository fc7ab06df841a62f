#pragma once

#include <stdexcept>
#include <string>

namespace tgsd {

enum class Errc {
  // graph / dictionary construction
  MalformedRow,
  NegativeWeight,
  DisconnectedInput,
  TooSmall,
  GMaxTooLarge,
  InsufficientBasis,
  // solver
  AsymmetricInput,
  NonPositiveRho,
  ShapeMismatch,
  NonFinite,
  // tasks
  EmptyMask,
  KTooLarge,
  LengthMismatch,
  WrongDictionaryKind,
  // config / io
  UnknownKey,
  TypeError,
  RangeError,
  RaggedRows,
  MaskShapeMismatch,
  NaNUnderObservedMask,
  Io,
};

const char* to_string(Errc code) noexcept;

/// Coarse failure class, used for CLI exit codes.
enum class ErrorClass { Config = 2, Data = 3, Numeric = 4 };

ErrorClass classify(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tgsd
