#include "fnshape/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace fnshape {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> splitTokens(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parseDouble(std::string_view token, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + std::string(token) + "'");
  return value;
}

long parseInt(std::string_view token, int line) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad integer '" + std::string(token) + "'");
  return value;
}

TriangleSoup parseOff(std::istream& in) {
  // Non-empty, comment-stripped lines with their 1-based line numbers.
  std::vector<std::pair<int, std::string>> lines;
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    auto t = trim(raw);
    if (!t.empty()) lines.emplace_back(lineNo, std::string(t));
  }
  if (lines.empty()) fail(ErrorCode::ParseError, "empty OFF stream");

  size_t cursor = 0;
  auto header = splitTokens(lines[0].second);
  if (header.empty() || header[0] != "OFF") fail(ErrorCode::ParseError, "missing OFF header");
  std::vector<std::string_view> counts(header.begin() + 1, header.end());
  ++cursor;
  if (counts.empty()) {
    if (cursor >= lines.size()) fail(ErrorCode::ParseError, "missing OFF counts");
    counts = splitTokens(lines[cursor].second);
    ++cursor;
  }
  if (counts.size() < 2) fail(ErrorCode::ParseError, "OFF counts line needs vertex and face counts");
  const int countLine = lines[cursor - 1].first;
  const long nv = parseInt(counts[0], countLine);
  const long nf = parseInt(counts[1], countLine);
  if (nv < 0 || nf < 0) fail(ErrorCode::ParseError, "negative OFF counts");

  TriangleSoup soup;
  soup.positions.reserve(nv);
  for (long i = 0; i < nv; ++i, ++cursor) {
    if (cursor >= lines.size()) fail(ErrorCode::ParseError, "truncated OFF vertex list");
    auto tok = splitTokens(lines[cursor].second);
    if (tok.size() < 3) fail(ErrorCode::ParseError, "line " + std::to_string(lines[cursor].first) + ": vertex needs 3 coordinates");
    const int ln = lines[cursor].first;
    soup.positions.emplace_back(parseDouble(tok[0], ln), parseDouble(tok[1], ln), parseDouble(tok[2], ln));
  }
  soup.triangles.reserve(nf);
  for (long i = 0; i < nf; ++i, ++cursor) {
    if (cursor >= lines.size()) fail(ErrorCode::ParseError, "truncated OFF face list");
    auto tok = splitTokens(lines[cursor].second);
    const int ln = lines[cursor].first;
    const long k = parseInt(tok[0], ln);
    if (k != 3) fail(ErrorCode::NonTriangular, "line " + std::to_string(ln) + ": face with " + std::to_string(k) + " vertices");
    if (tok.size() < 4) fail(ErrorCode::ParseError, "line " + std::to_string(ln) + ": truncated face");
    Triangle t{};
    for (int c = 0; c < 3; ++c) {
      const long idx = parseInt(tok[1 + c], ln);
      if (idx < 0 || idx >= nv) fail(ErrorCode::ParseError, "line " + std::to_string(ln) + ": vertex index out of range");
      t[c] = static_cast<int>(idx);
    }
    soup.triangles.push_back(t);
  }
  return soup;
}

TriangleSoup parseObj(std::istream& in) {
  TriangleSoup soup;
  std::string raw;
  int lineNo = 0;
  std::vector<std::vector<long>> pendingFaces;
  std::vector<int> pendingLines;
  while (std::getline(in, raw)) {
    ++lineNo;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    auto tok = splitTokens(trim(raw));
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) fail(ErrorCode::ParseError, "line " + std::to_string(lineNo) + ": vertex needs 3 coordinates");
      soup.positions.emplace_back(parseDouble(tok[1], lineNo), parseDouble(tok[2], lineNo), parseDouble(tok[3], lineNo));
    } else if (tok[0] == "f") {
      if (tok.size() != 4)
        fail(ErrorCode::NonTriangular,
             "line " + std::to_string(lineNo) + ": face with " + std::to_string(tok.size() - 1) + " vertices");
      std::vector<long> ids;
      for (size_t c = 1; c < tok.size(); ++c) {
        auto slash = tok[c].find('/');
        long idx = parseInt(tok[c].substr(0, slash), lineNo);
        if (idx == 0) fail(ErrorCode::ParseError, "line " + std::to_string(lineNo) + ": OBJ indices are 1-based");
        // negative indices count back from the vertices seen so far
        idx = idx > 0 ? idx - 1 : static_cast<long>(soup.positions.size()) + idx;
        ids.push_back(idx);
      }
      pendingFaces.push_back(std::move(ids));
      pendingLines.push_back(lineNo);
    }
  }
  const long nv = static_cast<long>(soup.positions.size());
  for (size_t i = 0; i < pendingFaces.size(); ++i) {
    Triangle t{};
    for (int c = 0; c < 3; ++c) {
      const long idx = pendingFaces[i][c];
      if (idx < 0 || idx >= nv)
        fail(ErrorCode::ParseError, "line " + std::to_string(pendingLines[i]) + ": vertex index out of range");
      t[c] = static_cast<int>(idx);
    }
    soup.triangles.push_back(t);
  }
  return soup;
}

inline uint64_t directedKey(int a, int b) { return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b); }

} // namespace

TriangleSoup parseMesh(std::istream& in, MeshFormat format) {
  return format == MeshFormat::Off ? parseOff(in) : parseObj(in);
}

TriangleSoup parseMesh(const std::string& text, MeshFormat format) {
  std::istringstream in(text);
  return parseMesh(in, format);
}

MeshFormat formatFromPath(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".off") return MeshFormat::Off;
  if (ext == ".obj") return MeshFormat::Obj;
  fail(ErrorCode::ParseError, "unknown mesh extension '" + ext + "' (expected .off or .obj)");
}

TriangleSoup readMeshFile(const std::filesystem::path& path) {
  const auto format = formatFromPath(path);
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return parseMesh(in, format);
}

ConnectivityReport inspectConnectivity(const TriangleSoup& soup) {
  ConnectivityReport report;
  auto flag = [&](bool& field, ErrorCode code, const std::string& message) {
    if (field && report.ok()) {
      report.problem = message;
      report.code = code;
    }
    field = false;
  };

  const int nv = static_cast<int>(soup.positions.size());
  const int nf = static_cast<int>(soup.triangles.size());
  if (nf == 0) flag(report.connected, ErrorCode::Disconnected, "mesh has no faces");

  for (int f = 0; f < nf; ++f) {
    const auto& t = soup.triangles[f];
    if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0])
      flag(report.nonDegenerate, ErrorCode::NonManifold, "face " + std::to_string(f) + " repeats a vertex");
  }
  if (!report.nonDegenerate) return report;

  std::unordered_map<uint64_t, int> directed;
  std::unordered_map<uint64_t, int> undirected;
  directed.reserve(3 * nf);
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      const int a = soup.triangles[f][k], b = soup.triangles[f][(k + 1) % 3];
      // a repeated directed edge is either a third face or a winding flip; told apart below
      directed.emplace(directedKey(a, b), 3 * f + k);
      ++undirected[directedKey(std::min(a, b), std::max(a, b))];
    }
  }
  for (const auto& [key, count] : undirected) {
    if (count > 2) {
      flag(report.edgeManifold, ErrorCode::NonManifold,
           "edge (" + std::to_string(key >> 32) + "," + std::to_string(key & 0xffffffffu) + ") has " +
               std::to_string(count) + " incident faces");
    }
  }
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      const int a = soup.triangles[f][k], b = soup.triangles[f][(k + 1) % 3];
      if (directed.at(directedKey(a, b)) != 3 * f + k &&
          undirected.at(directedKey(std::min(a, b), std::max(a, b))) == 2)
        flag(report.oriented, ErrorCode::NonManifold,
             "faces sharing edge (" + std::to_string(a) + "," + std::to_string(b) + ") are inconsistently oriented");
    }
  }
  if (!report.edgeManifold || !report.oriented) return report;

  // Vertex fans: count incident corners and walk each fan.
  std::vector<int> cornerCount(nv, 0);
  std::vector<int> boundaryOut(nv, 0);
  std::vector<int> someOut(nv, -1);
  auto twinOf = [&](int h) {
    const int f = h / 3, k = h % 3;
    const int a = soup.triangles[f][k], b = soup.triangles[f][(k + 1) % 3];
    auto it = directed.find(directedKey(b, a));
    return it == directed.end() ? -1 : it->second;
  };
  auto nextOf = [](int h) { return h % 3 == 2 ? h - 2 : h + 1; };
  auto prevOf = [](int h) { return h % 3 == 0 ? h + 2 : h - 1; };
  std::vector<int> fanStart(nv, -1);
  for (int h = 0; h < 3 * nf; ++h) {
    const int v = soup.triangles[h / 3][h % 3];
    ++cornerCount[v];
    if (twinOf(h) < 0) ++boundaryOut[v];
    if (twinOf(prevOf(h)) < 0) fanStart[v] = h;
    someOut[v] = h;
  }
  for (int v = 0; v < nv; ++v) {
    if (cornerCount[v] == 0) {
      flag(report.connected, ErrorCode::Disconnected, "vertex " + std::to_string(v) + " is not referenced by any face");
      continue;
    }
    if (boundaryOut[v] > 1) {
      flag(report.vertexManifold, ErrorCode::NonManifold, "vertex " + std::to_string(v) + " is a bowtie vertex");
      continue;
    }
    const int start = fanStart[v] >= 0 ? fanStart[v] : someOut[v];
    int h = start, visited = 0;
    while (true) {
      ++visited;
      const int t = twinOf(h);
      if (t < 0) break;
      h = nextOf(t);
      if (h == start) break;
      if (visited > cornerCount[v]) break;
    }
    if (visited != cornerCount[v])
      flag(report.vertexManifold, ErrorCode::NonManifold, "vertex " + std::to_string(v) + " has more than one face fan");
  }

  if (nf > 0) {
    std::vector<char> seen(nf, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop();
      for (int k = 0; k < 3; ++k) {
        const int t = twinOf(3 * f + k);
        if (t >= 0 && !seen[t / 3]) {
          seen[t / 3] = 1;
          ++reached;
          queue.push(t / 3);
        }
      }
    }
    if (reached != nf)
      flag(report.connected, ErrorCode::Disconnected,
           "faces form more than one component (" + std::to_string(reached) + " of " + std::to_string(nf) + " reachable)");
  }
  return report;
}

HalfedgeMesh HalfedgeMesh::build(std::vector<Vec3> positions, std::vector<Triangle> triangles) {
  const int nv = static_cast<int>(positions.size());
  for (const auto& t : triangles)
    for (int c : t)
      if (c < 0 || c >= nv) fail(ErrorCode::ParseError, "face references vertex " + std::to_string(c) + " out of range");

  TriangleSoup soup{std::move(positions), std::move(triangles)};
  auto report = inspectConnectivity(soup);
  if (!report.ok()) fail(report.code, report.problem);

  HalfedgeMesh mesh;
  mesh.positions_ = std::move(soup.positions);
  mesh.triangles_ = std::move(soup.triangles);
  const int nh = mesh.nHalfedges();

  std::unordered_map<uint64_t, int> directed;
  directed.reserve(nh);
  for (int h = 0; h < nh; ++h) directed.emplace(directedKey(mesh.origin(h), mesh.dest(h)), h);

  mesh.twin_.assign(nh, kNoTwin);
  mesh.halfedgeEdge_.assign(nh, -1);
  for (int h = 0; h < nh; ++h) {
    auto it = directed.find(directedKey(mesh.dest(h), mesh.origin(h)));
    if (it != directed.end()) mesh.twin_[h] = it->second;
  }
  for (int h = 0; h < nh; ++h) {
    const int t = mesh.twin_[h];
    if (t == kNoTwin || h < t) {
      const int e = static_cast<int>(mesh.edgeHalfedge_.size());
      mesh.edgeHalfedge_.push_back(h);
      mesh.halfedgeEdge_[h] = e;
      if (t != kNoTwin) mesh.halfedgeEdge_[t] = e;
    }
  }

  mesh.vertexStart_.assign(nv, -1);
  for (int h = 0; h < nh; ++h)
    if (mesh.vertexStart_[mesh.origin(h)] < 0) mesh.vertexStart_[mesh.origin(h)] = h;
  // boundary vertices start their fan right after the incoming boundary halfedge
  for (int h = 0; h < nh; ++h)
    if (mesh.twin_[mesh.prev(h)] == kNoTwin) mesh.vertexStart_[mesh.origin(h)] = h;

  // Boundary loops: follow outgoing boundary halfedges.
  std::vector<int> boundaryOut(nv, -1);
  for (int h = 0; h < nh; ++h)
    if (mesh.twin_[h] == kNoTwin) boundaryOut[mesh.origin(h)] = h;
  std::vector<char> used(nh, 0);
  std::vector<std::vector<int>> loops;
  for (int v = 0; v < nv; ++v) {
    const int start = boundaryOut[v];
    if (start < 0 || used[start]) continue;
    std::vector<int> loop;
    int h = start;
    do {
      used[h] = 1;
      loop.push_back(h);
      h = boundaryOut[mesh.dest(h)];
    } while (h != start && h >= 0);
    loops.push_back(std::move(loop));
  }
  // scanning v upward starts each loop at its smallest vertex and sorts loops
  mesh.boundaryLoops_ = std::move(loops);
  return mesh;
}

double HalfedgeMesh::euclideanLength(int e) const {
  const int h = edgeHalfedge_[e];
  return (positions_[origin(h)] - positions_[dest(h)]).norm();
}

std::vector<int> HalfedgeMesh::outgoingHalfedges(int v) const {
  std::vector<int> out;
  const int start = vertexStart_[v];
  int h = start;
  while (true) {
    out.push_back(h);
    const int t = twin_[h];
    if (t == kNoTwin) break;
    h = next(t);
    if (h == start) break;
  }
  return out;
}

std::vector<int> HalfedgeMesh::neighbors(int v) const {
  std::vector<int> out;
  for (int h : outgoingHalfedges(v)) out.push_back(dest(h));
  if (isBoundaryVertex(v)) out.push_back(origin(prev(vertexStart_[v])));
  return out;
}

int HalfedgeMesh::findHalfedge(int a, int b) const {
  for (int h : outgoingHalfedges(a))
    if (dest(h) == b) return h;
  return -1;
}

std::vector<int> HalfedgeMesh::boundaryLoopVertices(int loop) const {
  std::vector<int> out;
  for (int h : boundaryLoops_[loop]) out.push_back(origin(h));
  return out;
}

SurfaceSignature signature(const HalfedgeMesh& mesh) {
  const int chi = mesh.eulerCharacteristic();
  const int b = mesh.nBoundaryLoops();
  const int twiceGenus = 2 - b - chi;
  if (twiceGenus < 0 || twiceGenus % 2 != 0)
    fail(ErrorCode::TopologyError, "Euler characteristic " + std::to_string(chi) + " with " + std::to_string(b) +
                                       " boundary loops gives a non-integral or negative genus");
  return {twiceGenus / 2, b};
}

LandmarkSet parseLandmarks(std::istream& in) {
  LandmarkSet set;
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    auto t = trim(raw);
    if (t.empty()) continue;
    const long id = parseInt(t, lineNo);
    if (id < 0) fail(ErrorCode::ParseError, "line " + std::to_string(lineNo) + ": negative landmark index");
    set.vertexIds.push_back(static_cast<int>(id));
  }
  return set;
}

LandmarkSet readLandmarkFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return parseLandmarks(in);
}

void validateLandmarks(const HalfedgeMesh& mesh, const LandmarkSet& landmarks) {
  const int nv = mesh.nVertices();
  std::vector<int> owner(nv, -1);
  for (int id : landmarks.vertexIds) {
    if (id < 0 || id >= nv) fail(ErrorCode::LandmarkError, "landmark " + std::to_string(id) + " out of range");
    if (mesh.isBoundaryVertex(id)) fail(ErrorCode::LandmarkError, "landmark " + std::to_string(id) + " lies on the boundary");
    for (int w : mesh.neighbors(id))
      if (mesh.isBoundaryVertex(w))
        fail(ErrorCode::LandmarkError, "one-ring of landmark " + std::to_string(id) + " touches the boundary");
  }
  for (int id : landmarks.vertexIds) {
    std::vector<int> ring = mesh.neighbors(id);
    ring.push_back(id);
    for (int w : ring) {
      if (owner[w] == id) fail(ErrorCode::LandmarkError, "landmark " + std::to_string(id) + " listed twice");
      if (owner[w] >= 0)
        fail(ErrorCode::LandmarkError, "one-rings of landmarks " + std::to_string(owner[w]) + " and " +
                                           std::to_string(id) + " overlap");
      owner[w] = id;
    }
  }
}

HalfedgeMesh exciseLandmarks(const HalfedgeMesh& mesh, const LandmarkSet& landmarks, std::vector<int>* vertexOrigin) {
  const auto before = signature(mesh);
  const int n = static_cast<int>(landmarks.vertexIds.size());
  if (!before.admissible(n))
    fail(ErrorCode::AdmissibilityError, "2g-2+n = " + std::to_string(2 * before.genus - 2 + before.boundaryCount + n) +
                                            " is not positive for g=" + std::to_string(before.genus) +
                                            ", b+n=" + std::to_string(before.boundaryCount + n));
  validateLandmarks(mesh, landmarks);

  std::vector<char> removed(mesh.nVertices(), 0);
  for (int id : landmarks.vertexIds) removed[id] = 1;
  std::vector<int> newId(mesh.nVertices(), -1);
  std::vector<Vec3> positions;
  std::vector<int> origin;
  for (int v = 0; v < mesh.nVertices(); ++v) {
    if (removed[v]) continue;
    newId[v] = static_cast<int>(positions.size());
    positions.push_back(mesh.position(v));
    origin.push_back(v);
  }
  std::vector<Triangle> triangles;
  for (const auto& t : mesh.triangles()) {
    if (removed[t[0]] || removed[t[1]] || removed[t[2]]) continue;
    triangles.push_back({newId[t[0]], newId[t[1]], newId[t[2]]});
  }
  if (vertexOrigin) *vertexOrigin = std::move(origin);
  return HalfedgeMesh::build(std::move(positions), std::move(triangles));
}

TriangleSoup canonicalOrder(const TriangleSoup& soup, std::vector<int>* oldToNew) {
  const int nv = static_cast<int>(soup.positions.size());
  std::vector<int> order(nv);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = soup.positions[a];
    const auto& pb = soup.positions[b];
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return pa.z() < pb.z();
  });
  std::vector<int> map(nv);
  TriangleSoup out;
  out.positions.resize(nv);
  for (int i = 0; i < nv; ++i) {
    map[order[i]] = i;
    out.positions[i] = soup.positions[order[i]];
  }
  out.triangles.reserve(soup.triangles.size());
  for (const auto& t : soup.triangles) {
    Triangle r{map[t[0]], map[t[1]], map[t[2]]};
    const int k = static_cast<int>(std::min_element(r.begin(), r.end()) - r.begin());
    out.triangles.push_back({r[k], r[(k + 1) % 3], r[(k + 2) % 3]});
  }
  std::sort(out.triangles.begin(), out.triangles.end());
  if (oldToNew) *oldToNew = std::move(map);
  return out;
}

} // namespace fnshape
