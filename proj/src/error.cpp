#include "occamix/error.hpp"

namespace occamix {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownTransform: return "UnknownTransform";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeScore: return "NegativeScore";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::InvalidPrior: return "InvalidPrior";
    case ErrorCode::WeightLengthMismatch: return "WeightLengthMismatch";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::GridValidationError: return "GridValidationError";
    case ErrorCode::TooFewExamples: return "TooFewExamples";
    case ErrorCode::ProgramParseError: return "ProgramParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::AllRecordsMalformed: return "AllRecordsMalformed";
    case ErrorCode::AuthError: return "AuthError";
  }
  return "UnknownError";
}

int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::UnknownFixture:
      return 2;
    case ErrorCode::NetworkError:
    case ErrorCode::AllRecordsMalformed:
    case ErrorCode::AuthError:
      return 4;
    default:
      return 3;
  }
}

}  // namespace occamix
