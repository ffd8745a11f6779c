#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lag_geoflow {

// Failure kinds surfaced by the library. The CLI maps domain kinds to exit
// code 2 and numeric kinds to exit code 3.
enum class ErrorKind {
  // domain
  EmptyPolynomial,
  DegenerateRoots,
  BadSeed,
  ArcEndpointNotRoot,
  ArcThroughRoot,
  NotPositive,
  NotIsotopic,
  InvalidInput,
  // numeric
  StepTooLarge,
  BranchFailure,
  AtSingularity,
  AtBranchPoint,
  SingularityApproach,
  NoIntersection,
  StepCollapse,
  DoubleIntersection,
  HorizonReached,
  StepUnstable,
  CrossCheckFailure,
};

std::string_view to_string(ErrorKind kind);
bool is_domain_error(ErrorKind kind);

class GeoflowError : public std::runtime_error {
 public:
  GeoflowError(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace lag_geoflow
