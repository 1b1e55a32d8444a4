#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fnshape {

enum class ErrorCode {
  ParseError,
  NonManifold,
  NonTriangular,
  Disconnected,
  TopologyError,
  AdmissibilityError,
  LandmarkError,
  DegenerateTriangle,
  InvalidCuff,
  NotHyperbolic,
  RefinementNeeded,
  CurveError,
  InitError,
  NoConvergence,
  StepFailure,
  SolveFailure,
  NumericalDrift,
  GeometryError,
  CountMismatch,
  SignatureMismatch,
  IoError,
};

std::string_view errorCodeName(ErrorCode code);

// Single exception type for the library; the code identifies the failure and
// the stage (if set) names the pipeline step that raised it.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message, std::string stage = {});

  ErrorCode code() const { return code_; }
  const std::string& stage() const { return stage_; }
  const std::string& detail() const { return detail_; }

  // Copy of this error tagged with a pipeline stage name.
  Error withStage(std::string stage) const;

private:
  ErrorCode code_;
  std::string stage_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

} // namespace fnshape
