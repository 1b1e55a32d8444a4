#include "fnshape/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>
#include <openssl/evp.h>

#include "json.hpp"
#include "fnshape/pants.hpp"

namespace fnshape {

using nlohmann::json;

namespace {

std::string readBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.withStage(name);
  }
}

std::string landmarkText(const LandmarkSet& landmarks) {
  std::ostringstream out;
  for (int v : landmarks.vertexIds) out << v << '\n';
  return out.str();
}

} // namespace

std::string sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::IoError, "sha256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < size; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

MeshSource MeshSource::fromFile(const std::filesystem::path& path) {
  const auto bytes = readBytes(path);
  return {parseMesh(bytes, formatFromPath(path)), sha256Hex(bytes)};
}

MeshSource MeshSource::fromSoup(TriangleSoup soup) {
  std::ostringstream off;
  off << std::setprecision(17) << "OFF\n" << soup.positions.size() << ' ' << soup.triangles.size() << " 0\n";
  for (const auto& p : soup.positions) off << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& t : soup.triangles) off << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  MeshSource s;
  s.sha256 = sha256Hex(off.str());
  s.soup = std::move(soup);
  return s;
}

ShapeDescriptor computeDescriptor(const MeshSource& source, const LandmarkSet& landmarks, const PipelineConfig& config) {
  return runPipeline(source, landmarks, config).descriptor;
}

PipelineRun runPipeline(const MeshSource& source, const LandmarkSet& landmarks, const PipelineConfig& config) {
  PipelineRun run;
  ShapeDescriptor& d = run.descriptor;
  d.meshSha256 = source.sha256;
  d.landmarkSha256 = sha256Hex(landmarkText(landmarks));
  d.tolerance = config.tolerance;

  // Vertex numbering of the input must not matter, so everything runs on the
  // canonically ordered mesh.
  const auto mesh = stage("build", [&] {
    std::vector<int> oldToNew;
    const auto canonical = canonicalOrder(source.soup, &oldToNew);
    auto closed = HalfedgeMesh::build(canonical);
    LandmarkSet mapped;
    for (int v : landmarks.vertexIds) {
      if (v < 0 || v >= static_cast<int>(oldToNew.size()))
        fail(ErrorCode::LandmarkError, "landmark " + std::to_string(v) + " is not a vertex");
      mapped.vertexIds.push_back(oldToNew[v]);
    }
    std::sort(mapped.vertexIds.begin(), mapped.vertexIds.end());
    return std::pair{std::move(closed), mapped};
  });
  const auto punctured = stage("excise", [&] { return exciseLandmarks(mesh.first, mesh.second); });
  const auto sig = signature(punctured);
  const auto decomposition = stage("pants", [&] { return pantsDecompose(punctured); });

  const auto flow = stage("flow", [&] {
    FlowOptions options;
    options.tolerance = config.tolerance;
    options.maxIterations = config.maxIterations;
    options.hessian = config.hessian;
    options.observer = config.flowObserver;
    return flowToHyperbolic(punctured, initMetric(punctured), options);
  });
  d.residual = flow.residual;
  d.iterations = flow.iterations;
  d.totalArea = flow.totalArea;

  std::vector<double> lengths, twists;
  stage("measure", [&] {
    for (int i = 0; i < static_cast<int>(decomposition.curves.size()); ++i) {
      const auto& c = decomposition.curves[i];
      CurveSummary s;
      s.kind = c.kind;
      s.edgeCount = c.edgeCount();
      s.length = geodesicLength(layoutStrip(punctured, flow.metric, c));
      if (i < decomposition.interiorCount) {
        const auto t = cuffTwist(punctured, flow.metric, decomposition, i);
        s.twistOffset = t.offset;
        twists.push_back(t.angle);
      }
      lengths.push_back(s.length);
      d.curves.push_back(s);
    }
  });
  d.fn = stage("assemble", [&] { return assemble(decomposition, lengths, twists, sig); });
  run.mesh = punctured;
  run.decomposition = decomposition;
  run.flow = flow;
  return run;
}

std::vector<double> coordinateVector(const ShapeDescriptor& d) {
  std::vector<double> v;
  for (const auto& p : d.fn.pairs) {
    v.push_back(p.length);
    v.push_back(p.twist);
  }
  return v;
}

double shapeDistance(const ShapeDescriptor& a, const ShapeDescriptor& b) {
  if (a.fn.genus != b.fn.genus || a.fn.punctures != b.fn.punctures)
    fail(ErrorCode::SignatureMismatch, "descriptors live in different strata: (g,n) = (" + std::to_string(a.fn.genus) +
                                           "," + std::to_string(a.fn.punctures) + ") vs (" +
                                           std::to_string(b.fn.genus) + "," + std::to_string(b.fn.punctures) + ")");
  const auto x = coordinateVector(a), y = coordinateVector(b);
  if (x.size() != y.size()) fail(ErrorCode::CountMismatch, "descriptors have different pair counts");
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(sum);
}

std::string toJson(const ShapeDescriptor& d) {
  json pairs = json::array();
  for (const auto& p : d.fn.pairs) pairs.push_back({{"length", p.length}, {"twist", p.twist}});
  json curves = json::array();
  for (const auto& c : d.curves) {
    json entry{{"kind", c.kind == CurveKind::Interior ? "interior" : "boundary"},
               {"edge_count", c.edgeCount},
               {"length", c.length}};
    if (c.kind == CurveKind::Interior) entry["twist_offset"] = c.twistOffset;
    curves.push_back(entry);
  }
  json j{{"genus", d.fn.genus},
         {"punctures", d.fn.punctures},
         {"pairs", pairs},
         {"boundary_lengths", d.fn.boundaryLengths},
         {"diagnostics",
          {{"residual", d.residual}, {"iterations", d.iterations}, {"total_area", d.totalArea}, {"curves", curves}}},
         {"provenance",
          {{"mesh_sha256", d.meshSha256}, {"landmarks_sha256", d.landmarkSha256}, {"tolerance", d.tolerance}}},
         {"metadata",
          {{"twist", "angle 2*pi*offset/length; offset between seam feet reduced to (-l/2, l/2]; "
                     "no marking is matched between shapes"}}}};
  return j.dump(2) + "\n";
}

ShapeDescriptor descriptorFromJson(const std::string& text) {
  try {
    const auto j = json::parse(text);
    ShapeDescriptor d;
    d.fn.genus = j.at("genus").get<int>();
    d.fn.punctures = j.at("punctures").get<int>();
    for (const auto& p : j.at("pairs")) d.fn.pairs.push_back({p.at("length").get<double>(), p.at("twist").get<double>()});
    d.fn.boundaryLengths = j.at("boundary_lengths").get<std::vector<double>>();
    if (static_cast<int>(d.fn.pairs.size()) != 3 * d.fn.genus - 3 + d.fn.punctures ||
        static_cast<int>(d.fn.boundaryLengths.size()) != d.fn.punctures)
      fail(ErrorCode::CountMismatch, "descriptor pair count does not match its genus and punctures");
    if (j.contains("diagnostics")) {
      const auto& diag = j.at("diagnostics");
      d.residual = diag.value("residual", 0.0);
      d.iterations = diag.value("iterations", 0);
      d.totalArea = diag.value("total_area", 0.0);
      if (diag.contains("curves"))
        for (const auto& c : diag.at("curves")) {
          CurveSummary s;
          s.kind = c.at("kind").get<std::string>() == "interior" ? CurveKind::Interior : CurveKind::Boundary;
          s.edgeCount = c.at("edge_count").get<int>();
          s.length = c.value("length", 0.0);
          s.twistOffset = c.value("twist_offset", 0.0);
          d.curves.push_back(s);
        }
    }
    if (j.contains("provenance")) {
      const auto& prov = j.at("provenance");
      d.meshSha256 = prov.value("mesh_sha256", "");
      d.landmarkSha256 = prov.value("landmarks_sha256", "");
      d.tolerance = prov.value("tolerance", 0.0);
    }
    return d;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("descriptor JSON: ") + e.what());
  }
}

ShapeDescriptor readDescriptorFile(const std::filesystem::path& path) {
  try {
    return descriptorFromJson(readBytes(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

ValidationReport validate(const TriangleSoup& soup) {
  ValidationReport r;
  r.parsed = true;
  const auto conn = inspectConnectivity(soup);
  r.manifold = conn.edgeManifold && conn.vertexManifold && conn.nonDegenerate;
  r.oriented = conn.oriented;
  r.connected = conn.connected;
  r.problem = conn.problem;
  for (const auto& t : soup.triangles) {
    double smallest = std::numbers::pi;
    for (int k = 0; k < 3; ++k) {
      const Vec3 a = soup.positions[t[(k + 1) % 3]] - soup.positions[t[k]];
      const Vec3 b = soup.positions[t[(k + 2) % 3]] - soup.positions[t[k]];
      smallest = std::min(smallest, std::atan2(a.cross(b).norm(), a.dot(b)));
    }
    const int bin = std::clamp(static_cast<int>(smallest * 180 / std::numbers::pi / 10), 0, 5);
    ++r.minAngleHistogram[bin];
  }
  if (!conn.ok()) return r;
  const auto sig = signature(HalfedgeMesh::build(soup));
  r.signature = sig;
  for (int n = 0; n < 6; ++n) r.admissible[n] = sig.admissible(n);
  return r;
}

ValidationReport validate(const std::filesystem::path& meshPath) {
  try {
    return validate(readMeshFile(meshPath));
  } catch (const Error& e) {
    ValidationReport r;
    r.problem = e.what();
    return r;
  }
}

std::string toJson(const ValidationReport& r) {
  json j{{"parsed", r.parsed},
         {"manifold", r.manifold},
         {"oriented", r.oriented},
         {"connected", r.connected},
         {"min_angle_histogram_deg10", r.minAngleHistogram}};
  if (!r.problem.empty()) j["problem"] = r.problem;
  if (r.signature) {
    j["genus"] = r.signature->genus;
    j["boundary_loops"] = r.signature->boundaryCount;
    json admissible = json::object();
    for (int n = 0; n < 6; ++n) admissible[std::to_string(n)] = r.admissible[n];
    j["admissible"] = admissible;
  }
  return j.dump(2) + "\n";
}

} // namespace fnshape
