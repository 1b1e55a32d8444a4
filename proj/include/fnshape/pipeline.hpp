#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fnshape/fenchel_nielsen.hpp"
#include "fnshape/mesh.hpp"
#include "fnshape/ricci_flow.hpp"

namespace fnshape {

// Lowercase hex SHA-256.
std::string sha256Hex(const std::string& bytes);

// A mesh plus the digest recorded in the descriptor.
struct MeshSource {
  TriangleSoup soup;
  std::string sha256;

  // Digest of the file bytes.
  static MeshSource fromFile(const std::filesystem::path& path);
  // Digest of an OFF rendering of the soup.
  static MeshSource fromSoup(TriangleSoup soup);
};

struct PipelineConfig {
  double tolerance = 1e-8;
  int maxIterations = 100;
  HessianMode hessian = HessianMode::Analytic;
  std::function<void(const FlowIterate&)> flowObserver;
};

struct CurveSummary {
  CurveKind kind = CurveKind::Interior;
  int edgeCount = 0;
  double length = 0.0;      // measured geodesic length (boundary ones too)
  double twistOffset = 0.0; // raw signed offset, interior curves only
};

struct ShapeDescriptor {
  FNCoordinates fn;
  // diagnostics
  double residual = 0.0;
  int iterations = 0;
  double totalArea = 0.0;
  std::vector<CurveSummary> curves;
  // provenance
  std::string meshSha256;
  std::string landmarkSha256;
  double tolerance = 0.0;
};

// Canonical ordering -> excise -> pants -> flow -> measure -> assemble.
// Errors come out tagged with the failing stage.
ShapeDescriptor computeDescriptor(const MeshSource& source, const LandmarkSet& landmarks,
                                  const PipelineConfig& config = {});

// The same run with its intermediate results.
struct PipelineRun {
  HalfedgeMesh mesh; // canonically ordered, landmarks excised
  PantsDecomposition decomposition;
  FlowResult flow;
  ShapeDescriptor descriptor;
};

PipelineRun runPipeline(const MeshSource& source, const LandmarkSet& landmarks, const PipelineConfig& config = {});

// Euclidean distance between the (l_1, t_1, ..., l_k, t_k) vectors; throws
// SignatureMismatch across strata.
double shapeDistance(const ShapeDescriptor& a, const ShapeDescriptor& b);

// Coordinate vector entering the distance.
std::vector<double> coordinateVector(const ShapeDescriptor& d);

std::string toJson(const ShapeDescriptor& d);
ShapeDescriptor descriptorFromJson(const std::string& text);
ShapeDescriptor readDescriptorFile(const std::filesystem::path& path);

struct ValidationReport {
  bool parsed = false;
  bool manifold = false;
  bool oriented = false;
  bool connected = false;
  std::string problem;
  std::optional<SurfaceSignature> signature;
  std::array<bool, 6> admissible{}; // with n = 0..5 punctures
  // minimum-angle histogram of the Euclidean triangles, 10 degree bins up to 60
  std::array<int, 6> minAngleHistogram{};

  bool ok() const { return parsed && manifold && oriented && connected; }
};

ValidationReport validate(const std::filesystem::path& meshPath);
ValidationReport validate(const TriangleSoup& soup);
std::string toJson(const ValidationReport& report);

} // namespace fnshape
