#include "kinemark/error.hpp"

namespace kinemark {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::UnknownJointLabel: return "UnknownJointLabel";
    case ErrorCode::MissingJoint: return "MissingJoint";
    case ErrorCode::DuplicateJoint: return "DuplicateJoint";
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::UnmappedJoint: return "UnmappedJoint";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::BadSampleInterval: return "BadSampleInterval";
    case ErrorCode::InconsistentMetadata: return "InconsistentMetadata";
    case ErrorCode::EmptyDefinitions: return "EmptyDefinitions";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::WindowTooLong: return "WindowTooLong";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::TooFewFeatures: return "TooFewFeatures";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::ZeroVarianceOfDifferences: return "ZeroVarianceOfDifferences";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::BadArgument: return "BadArgument";
    case ErrorCode::NoRecordings: return "NoRecordings";
    case ErrorCode::NoPairedSessions: return "NoPairedSessions";
    case ErrorCode::MissingAction: return "MissingAction";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "UnknownError";
}

}  // namespace kinemark
