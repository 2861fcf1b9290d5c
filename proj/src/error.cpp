#include "gifs/error.hpp"

namespace gifs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSimpleGraph: return "NonSimpleGraph";
    case ErrorCode::ConnectorSearchExhausted: return "ConnectorSearchExhausted";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::DegenerateMap: return "DegenerateMap";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::MixedFamily: return "MixedFamily";
    case ErrorCode::ConditionViolation: return "ConditionViolation";
    case ErrorCode::NonAdmissibleWord: return "NonAdmissibleWord";
    case ErrorCode::NoAdmissibleWords: return "NoAdmissibleWords";
    case ErrorCode::IterationStall: return "IterationStall";
    case ErrorCode::IrregularSystem: return "IrregularSystem";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::DegenerateBounds: return "DegenerateBounds";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::InvalidAlphabet: return "InvalidAlphabet";
    case ErrorCode::SummabilityWitnessMissing: return "SummabilityWitnessMissing";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace gifs
