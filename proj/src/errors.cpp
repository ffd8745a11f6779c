#include "lag_geoflow/errors.hpp"

namespace lag_geoflow {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyPolynomial: return "EmptyPolynomial";
    case ErrorKind::DegenerateRoots: return "DegenerateRoots";
    case ErrorKind::BadSeed: return "BadSeed";
    case ErrorKind::ArcEndpointNotRoot: return "ArcEndpointNotRoot";
    case ErrorKind::ArcThroughRoot: return "ArcThroughRoot";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotIsotopic: return "NotIsotopic";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::BranchFailure: return "BranchFailure";
    case ErrorKind::AtSingularity: return "AtSingularity";
    case ErrorKind::AtBranchPoint: return "AtBranchPoint";
    case ErrorKind::SingularityApproach: return "SingularityApproach";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::DoubleIntersection: return "DoubleIntersection";
    case ErrorKind::HorizonReached: return "HorizonReached";
    case ErrorKind::StepUnstable: return "StepUnstable";
    case ErrorKind::CrossCheckFailure: return "CrossCheckFailure";
  }
  return "Unknown";
}

bool is_domain_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyPolynomial:
    case ErrorKind::DegenerateRoots:
    case ErrorKind::BadSeed:
    case ErrorKind::ArcEndpointNotRoot:
    case ErrorKind::ArcThroughRoot:
    case ErrorKind::NotPositive:
    case ErrorKind::NotIsotopic:
    case ErrorKind::InvalidInput:
      return true;
    default:
      return false;
  }
}

}  // namespace lag_geoflow
