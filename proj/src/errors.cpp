#include "fnshape/errors.hpp"

namespace fnshape {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::NonManifold: return "NonManifold";
  case ErrorCode::NonTriangular: return "NonTriangular";
  case ErrorCode::Disconnected: return "Disconnected";
  case ErrorCode::TopologyError: return "TopologyError";
  case ErrorCode::AdmissibilityError: return "AdmissibilityError";
  case ErrorCode::LandmarkError: return "LandmarkError";
  case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
  case ErrorCode::InvalidCuff: return "InvalidCuff";
  case ErrorCode::NotHyperbolic: return "NotHyperbolic";
  case ErrorCode::RefinementNeeded: return "RefinementNeeded";
  case ErrorCode::CurveError: return "CurveError";
  case ErrorCode::InitError: return "InitError";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::StepFailure: return "StepFailure";
  case ErrorCode::SolveFailure: return "SolveFailure";
  case ErrorCode::NumericalDrift: return "NumericalDrift";
  case ErrorCode::GeometryError: return "GeometryError";
  case ErrorCode::CountMismatch: return "CountMismatch";
  case ErrorCode::SignatureMismatch: return "SignatureMismatch";
  case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {
std::string formatMessage(ErrorCode code, const std::string& message, const std::string& stage) {
  std::string out(errorCodeName(code));
  if (!stage.empty()) out += " [stage " + stage + "]";
  out += ": " + message;
  return out;
}
} // namespace

Error::Error(ErrorCode code, const std::string& message, std::string stage)
    : std::runtime_error(formatMessage(code, message, stage)), code_(code), stage_(std::move(stage)),
      detail_(message) {}

Error Error::withStage(std::string stage) const { return Error(code_, detail_, std::move(stage)); }

} // namespace fnshape
