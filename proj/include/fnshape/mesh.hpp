#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fnshape/errors.hpp"

namespace fnshape {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

// Raw parse result: positions plus triangles, no connectivity checks yet.
struct TriangleSoup {
  std::vector<Vec3> positions;
  std::vector<Triangle> triangles;
};

enum class MeshFormat { Off, Obj };

TriangleSoup parseMesh(std::istream& in, MeshFormat format);
TriangleSoup parseMesh(const std::string& text, MeshFormat format);
MeshFormat formatFromPath(const std::filesystem::path& path);
TriangleSoup readMeshFile(const std::filesystem::path& path);

// Connectivity checks on a soup that do not throw. HalfedgeMesh::build
// raises the first failure recorded here.
struct ConnectivityReport {
  bool nonDegenerate = true;
  bool edgeManifold = true;  // no edge with more than two faces
  bool oriented = true;      // consistent winding across shared edges
  bool vertexManifold = true; // every vertex star is a single fan
  bool connected = true;     // one face component, no unreferenced vertex
  std::string problem;       // first failure, human readable
  ErrorCode code = ErrorCode::NonManifold;

  bool ok() const { return nonDegenerate && edgeManifold && oriented && vertexManifold && connected; }
};

ConnectivityReport inspectConnectivity(const TriangleSoup& soup);

// Oriented manifold triangle mesh, possibly with boundary.
//
// Halfedge h = 3*f + k runs from corner k to corner k+1 of face f, so face
// cycles have length 3 by construction and the face lies to the left of each
// of its halfedges. Boundary halfedges carry twin == kNoTwin.
class HalfedgeMesh {
public:
  static constexpr int kNoTwin = -1;

  HalfedgeMesh() = default;
  static HalfedgeMesh build(std::vector<Vec3> positions, std::vector<Triangle> triangles);
  static HalfedgeMesh build(const TriangleSoup& soup) { return build(soup.positions, soup.triangles); }

  int nVertices() const { return static_cast<int>(positions_.size()); }
  int nFaces() const { return static_cast<int>(triangles_.size()); }
  int nHalfedges() const { return 3 * nFaces(); }
  int nEdges() const { return static_cast<int>(edgeHalfedge_.size()); }
  int eulerCharacteristic() const { return nVertices() - nEdges() + nFaces(); }

  int face(int h) const { return h / 3; }
  int next(int h) const { return h % 3 == 2 ? h - 2 : h + 1; }
  int prev(int h) const { return h % 3 == 0 ? h + 2 : h - 1; }
  int origin(int h) const { return triangles_[h / 3][h % 3]; }
  int dest(int h) const { return origin(next(h)); }
  int twin(int h) const { return twin_[h]; }
  int edge(int h) const { return halfedgeEdge_[h]; }
  int edgeHalfedge(int e) const { return edgeHalfedge_[e]; }

  bool isBoundaryHalfedge(int h) const { return twin_[h] == kNoTwin; }
  bool isBoundaryEdge(int e) const { return isBoundaryHalfedge(edgeHalfedge_[e]); }
  bool isBoundaryVertex(int v) const { return isBoundaryHalfedge(prev(vertexStart_[v])) ; }

  const Triangle& triangle(int f) const { return triangles_[f]; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Vec3& position(int v) const { return positions_[v]; }
  const std::vector<Vec3>& positions() const { return positions_; }
  double euclideanLength(int e) const;

  // Outgoing halfedges of v in clockwise order. For a boundary vertex the
  // sequence starts after the incoming boundary halfedge and ends with the
  // outgoing boundary halfedge.
  std::vector<int> outgoingHalfedges(int v) const;
  std::vector<int> neighbors(int v) const;
  int degree(int v) const { return static_cast<int>(outgoingHalfedges(v).size()) + (isBoundaryVertex(v) ? 1 : 0); }

  // Halfedge a->b, or -1.
  int findHalfedge(int a, int b) const;

  // Boundary loops as cycles of boundary halfedges, each loop starting at its
  // smallest origin vertex; loops sorted by that vertex.
  const std::vector<std::vector<int>>& boundaryLoops() const { return boundaryLoops_; }
  std::vector<int> boundaryLoopVertices(int loop) const;
  int nBoundaryLoops() const { return static_cast<int>(boundaryLoops_.size()); }

private:
  std::vector<Vec3> positions_;
  std::vector<Triangle> triangles_;
  std::vector<int> twin_;
  std::vector<int> halfedgeEdge_;
  std::vector<int> edgeHalfedge_;
  std::vector<int> vertexStart_;
  std::vector<std::vector<int>> boundaryLoops_;
};

struct SurfaceSignature {
  int genus = 0;
  int boundaryCount = 0;

  int eulerCharacteristic() const { return 2 - 2 * genus - boundaryCount; }
  // 2g - 2 + b + extra > 0
  bool admissible(int extraPunctures = 0) const { return 2 * genus - 2 + boundaryCount + extraPunctures > 0; }
  bool operator==(const SurfaceSignature&) const = default;
};

SurfaceSignature signature(const HalfedgeMesh& mesh);

struct LandmarkSet {
  std::vector<int> vertexIds;
};

LandmarkSet parseLandmarks(std::istream& in);
LandmarkSet readLandmarkFile(const std::filesystem::path& path);

// Throws LandmarkError unless the landmarks are distinct interior vertices
// whose closed one-rings are pairwise disjoint and avoid the boundary.
void validateLandmarks(const HalfedgeMesh& mesh, const LandmarkSet& landmarks);

// Removes each landmark and its incident faces, leaving its link cycle as a
// new boundary loop. Surviving vertices keep their relative order;
// vertexOrigin (if given) receives the old id of every new vertex.
HalfedgeMesh exciseLandmarks(const HalfedgeMesh& mesh, const LandmarkSet& landmarks,
                             std::vector<int>* vertexOrigin = nullptr);

// Relabels vertices by lexicographic position order (ties by old id) and
// sorts faces, so the result does not depend on the input numbering.
// oldToNew (if given) receives the permutation.
TriangleSoup canonicalOrder(const TriangleSoup& soup, std::vector<int>* oldToNew = nullptr);

} // namespace fnshape
