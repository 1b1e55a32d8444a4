#include <algorithm>
#include <sstream>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "fnshape/pipeline.hpp"

using namespace fnshape;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;

int exitCodeFor(ErrorCode code) {
  switch (code) {
  case ErrorCode::NoConvergence:
  case ErrorCode::StepFailure:
  case ErrorCode::SolveFailure:
    return kExitNoConvergence;
  case ErrorCode::ParseError:
  case ErrorCode::NonManifold:
  case ErrorCode::NonTriangular:
  case ErrorCode::Disconnected:
  case ErrorCode::AdmissibilityError:
  case ErrorCode::LandmarkError:
  case ErrorCode::DegenerateTriangle:
  case ErrorCode::RefinementNeeded:
  case ErrorCode::IoError:
    return kExitInvalid;
  default:
    return kExitFailure;
  }
}

void writeFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorCode::IoError, "cannot write " + path.string());
}

int compute(const fs::path& meshPath, const std::string& landmarkPath, double tol, int maxIter,
            const std::string& logFlow, const fs::path& outPath) {
  PipelineConfig config;
  config.tolerance = tol;
  config.maxIterations = maxIter;
  std::ofstream log;
  if (!logFlow.empty()) {
    log.open(logFlow);
    if (!log) fail(ErrorCode::IoError, "cannot write " + logFlow);
    log << "iteration,residual,min_radius,step_scale,total_area,gauss_bonnet_error\n" << std::setprecision(17);
    config.flowObserver = [&log](const FlowIterate& it) {
      log << it.iteration << ',' << it.residual << ',' << it.minRadius << ',' << it.stepScale << ',' << it.totalArea
          << ',' << it.gaussBonnetError << '\n';
    };
  }
  const auto landmarks = landmarkPath.empty() ? LandmarkSet{} : readLandmarkFile(landmarkPath);
  const auto descriptor = computeDescriptor(MeshSource::fromFile(meshPath), landmarks, config);
  writeFile(outPath, toJson(descriptor));
  std::cout << "g=" << descriptor.fn.genus << " n=" << descriptor.fn.punctures << " pairs=" << descriptor.fn.pairs.size()
            << " iterations=" << descriptor.iterations << " residual=" << descriptor.residual << "\n";
  return 0;
}

int distance(const fs::path& a, const fs::path& b) {
  std::cout << std::setprecision(17) << shapeDistance(readDescriptorFile(a), readDescriptorFile(b)) << "\n";
  return 0;
}

int matrix(const fs::path& dir, const fs::path& outPath) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<ShapeDescriptor> descriptors;
  for (const auto& f : files) descriptors.push_back(readDescriptorFile(f));

  std::ostringstream csv;
  csv << std::setprecision(17);
  for (const auto& f : files) csv << ',' << f.filename().string();
  csv << '\n';
  for (size_t i = 0; i < files.size(); ++i) {
    csv << files[i].filename().string();
    for (size_t j = 0; j < files.size(); ++j) {
      csv << ',';
      try {
        csv << shapeDistance(descriptors[i], descriptors[j]);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SignatureMismatch) throw;
        csv << "NA";
      }
    }
    csv << '\n';
  }
  writeFile(outPath, csv.str());
  return 0;
}

int validateCommand(const fs::path& meshPath) {
  const auto report = validate(meshPath);
  std::cout << toJson(report);
  return report.ok() ? 0 : kExitInvalid;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shape descriptors from Fenchel-Nielsen coordinates of surface meshes"};
  app.require_subcommand(1);

  auto* computeCmd = app.add_subcommand("compute", "compute the descriptor of a mesh");
  std::string meshPath, landmarkPath, logFlow, outPath;
  double tol = 1e-8;
  int maxIter = 100;
  computeCmd->add_option("mesh", meshPath, "mesh file (.off or .obj)")->required()->check(CLI::ExistingFile);
  computeCmd->add_option("--landmarks", landmarkPath, "landmark vertex ids, one per line")->check(CLI::ExistingFile);
  computeCmd->add_option("--tol", tol, "curvature residual tolerance")->check(CLI::PositiveNumber);
  computeCmd->add_option("--max-iter", maxIter, "Newton iteration budget")->check(CLI::PositiveNumber);
  computeCmd->add_option("--log-flow", logFlow, "write per-iteration flow diagnostics as CSV");
  computeCmd->add_option("-o,--output", outPath, "descriptor JSON")->required();

  auto* distanceCmd = app.add_subcommand("distance", "distance between two descriptors");
  std::string a, b;
  distanceCmd->add_option("a", a)->required()->check(CLI::ExistingFile);
  distanceCmd->add_option("b", b)->required()->check(CLI::ExistingFile);

  auto* matrixCmd = app.add_subcommand("matrix", "pairwise distances of the descriptors in a directory");
  std::string dir, csvPath;
  matrixCmd->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);
  matrixCmd->add_option("-o,--output", csvPath, "CSV file")->required();

  auto* validateCmd = app.add_subcommand("validate", "report mesh validity and topology");
  std::string validatePath;
  validateCmd->add_option("mesh", validatePath)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*computeCmd) return compute(meshPath, landmarkPath, tol, maxIter, logFlow, outPath);
    if (*distanceCmd) return distance(a, b);
    if (*matrixCmd) return matrix(dir, csvPath);
    if (*validateCmd) return validateCommand(validatePath);
  } catch (const Error& e) {
    std::cerr << "fnshape: " << e.what() << "\n";
    return exitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "fnshape: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
