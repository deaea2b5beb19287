#pragma once

#include <stdexcept>
#include <string>

namespace smash {

enum class ErrorCode {
  UnknownAttribute,
  UnknownTable,
  TypeMismatch,
  EmptyAggregate,
  AggregateOverNonNumeric,
  ParseError,
  UnsupportedConstruct,
  InvalidJoinTree,
  CyclicQuery,
  UndefinedIntermediate,
  EmptySet,
  NotAggregate,
  NoJoins,
  NonFinite,
  TooFewExamples,
  EmptyTraining,
  LengthMismatch,
  UntrainedModel,
  AllDifferencesZero,
  TooFewPairs,
  ZeroVariance,
  MissingStrategy,
  UnseenFeatureDimension,
  Timeout,
  Io,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is the
/// stable, testable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(ErrorCode::ParseError, msg + " at line " + std::to_string(line) + ", column " +
                                         std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace smash
