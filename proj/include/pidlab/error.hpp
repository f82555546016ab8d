#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pidlab {

enum class Errc {
  NegativeMass,
  ZeroMass,
  NotNormalized,
  UnknownVariable,
  ZeroProbabilityEvent,
  OverlappingSets,
  SupportMismatch,
  BadTimeLabels,
  EmptySupport,
  GroundMismatch,
  GroundTooLarge,
  NotDoublyMarkov,
  DegenerateMarginal,
  Infeasible,
  BadProblem,
  TooLarge,
  UnknownName,
  BadParams,
  NonConvergence,
  UnimplementedMeasure,
  ParseError,
  IoError,
};

std::string_view errc_name(Errc code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pidlab
