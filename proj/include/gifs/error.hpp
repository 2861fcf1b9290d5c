#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gifs {

enum class ErrorCode {
  NonSimpleGraph,
  ConnectorSearchExhausted,
  DomainViolation,
  DegenerateMap,
  UnsupportedShape,
  MixedFamily,
  ConditionViolation,
  NonAdmissibleWord,
  NoAdmissibleWords,
  IterationStall,
  IrregularSystem,
  BudgetExhausted,
  DegenerateBounds,
  AlphabetMismatch,
  InvalidAlphabet,
  SummabilityWitnessMissing,
  SchemaViolation,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// All library faults are reported through this exception; `code()` is the
// machine-readable tag emitted in CLI error records.
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

}  // namespace gifs
