#pragma once

#include <stdexcept>
#include <string>

namespace occamix {

enum class ErrorCode {
  // configuration
  ConfigError,
  UnknownFixture,
  // grids
  RaggedRows,
  ValueOutOfRange,
  DimensionTooLarge,
  DimensionMismatch,
  EmptyInput,
  // hypothesis DSL
  SyntaxError,
  UnknownTransform,
  ParamOutOfRange,
  // scoring
  EmptyPool,
  LengthMismatch,
  NegativeScore,
  EmptyData,
  InvalidPrior,
  // mixture
  WeightLengthMismatch,
  InvalidWeights,
  // tasks
  IoError,
  SchemaError,
  GridValidationError,
  TooFewExamples,
  // provider
  ProgramParseError,
  DuplicateId,
  NetworkError,
  AllRecordsMalformed,
  AuthError,
};

const char* error_code_name(ErrorCode code);

// Exit-code class used by the CLI: 2 = config, 3 = data, 4 = provider.
int error_exit_code(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace occamix
