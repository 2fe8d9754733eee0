#pragma once

#include <stdexcept>
#include <string>

namespace nlm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A state or amplitude set violates its normalization invariant.
struct NotNormalizedError : Error {
  using Error::Error;
};

// A gate references a register outside the five-register system, or its
// matrix does not match its footprint.
struct FootprintMismatchError : Error {
  using Error::Error;
};

struct DuplicateRegisterError : Error {
  using Error::Error;
};

// A post-selection the input can never pass (projected mass below 1e-14).
struct ZeroProbabilityBranchError : Error {
  using Error::Error;
};

struct ParameterOutOfRangeError : Error {
  using Error::Error;
};

struct ProbabilityNotNormalizedError : Error {
  using Error::Error;
};

struct EmptyTableError : Error {
  using Error::Error;
};

struct InvalidDensityMatrixError : Error {
  using Error::Error;
};

struct RankDeficientRecordError : Error {
  using Error::Error;
};

// Diagnostic for circuit-file problems; line and column are 1-based.
struct ParseError : Error {
  int line;
  int column;
  std::string token;

  ParseError(std::string message, int line_, int column_, std::string token_)
      : Error(std::move(message)), line(line_), column(column_), token(std::move(token_)) {}
};

struct SyntaxError : ParseError {
  using ParseError::ParseError;
};

struct SemanticError : ParseError {
  using ParseError::ParseError;
};

}  // namespace nlm
