#include "smash/error.hpp"

namespace smash {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::EmptyAggregate: return "EmptyAggregate";
    case ErrorCode::AggregateOverNonNumeric: return "AggregateOverNonNumeric";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::InvalidJoinTree: return "InvalidJoinTree";
    case ErrorCode::CyclicQuery: return "CyclicQuery";
    case ErrorCode::UndefinedIntermediate: return "UndefinedIntermediate";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NotAggregate: return "NotAggregate";
    case ErrorCode::NoJoins: return "NoJoins";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooFewExamples: return "TooFewExamples";
    case ErrorCode::EmptyTraining: return "EmptyTraining";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UntrainedModel: return "UntrainedModel";
    case ErrorCode::AllDifferencesZero: return "AllDifferencesZero";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::MissingStrategy: return "MissingStrategy";
    case ErrorCode::UnseenFeatureDimension: return "UnseenFeatureDimension";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace smash
