#pragma once

#include <array>
#include <vector>

#include "fnshape/mesh.hpp"

namespace fnshape {

enum class CurveKind { Interior, Boundary };

// Simple closed vertex cycle along mesh edges; vertices[i] -> vertices[i+1]
// is the orientation. The left side is the side of the faces to the left of
// those halfedges.
struct CutCurve {
  std::vector<int> vertices;
  CurveKind kind = CurveKind::Interior;

  int edgeCount() const { return static_cast<int>(vertices.size()); }
  CutCurve reversed() const;
  bool operator==(const CutCurve&) const = default;
};

enum class Side { Left = 0, Right = 1 };

struct CuffSlot {
  int curve = -1;
  Side side = Side::Left;
  bool operator==(const CuffSlot&) const = default;
};

struct Pants {
  std::array<CuffSlot, 3> cuffs;
  std::vector<int> faces; // faces of the decomposed mesh
};

// Where a curve sits in the decomposition. Boundary curves only have a left
// neighbour (the mesh lies to the left of boundary halfedges).
struct CurveAdjacency {
  int leftPants = -1, leftSlot = -1;
  int rightPants = -1, rightSlot = -1;
};

struct PantsDecomposition {
  std::vector<CutCurve> curves; // interior curves first, then boundary curves
  int interiorCount = 0;
  std::vector<Pants> pants;
  std::vector<CurveAdjacency> adjacency; // parallel to curves
  std::vector<int> facePants;            // pants index of each face

  int boundaryCount() const { return static_cast<int>(curves.size()) - interiorCount; }
};

// Independent generators of the first homology from a tree-cotree split:
// 2g + max(b-1, 0) simple cycles.
std::vector<CutCurve> homotopyGenerators(const HalfedgeMesh& mesh);

// Greedy decomposition: repeatedly cut a component that is not yet a pair
// of pants along an essential simple cycle avoiding its boundary. Components
// with genus take the shortest (edge count) such cycle, preferring ones that
// keep 3, then 2, then 1 vertices of room to the boundary. Genus-0
// components are split along the shortest bisector running midway between
// two neighbouring boundary loops and the rest. Throws RefinementNeeded when
// the mesh is too coarse for any candidate; subdividing is the remedy.
// Curves come out pairwise vertex-disjoint, in discovery order, each
// starting at its smallest vertex and oriented so that the lower indexed
// adjacent pants lies on its left.
PantsDecomposition pantsDecompose(const HalfedgeMesh& mesh);

// Decomposition along caller-supplied interior curves. Throws TopologyError
// unless every resulting component is a pair of pants.
PantsDecomposition decomposeAlong(const HalfedgeMesh& mesh, std::vector<CutCurve> interiorCurves);

// Identifies a boundary loop of a cut component: either a side of one of the
// cut curves or a boundary loop of the input mesh.
struct LoopLabel {
  int curve = -1;      // index into the cut list, or -1
  Side side = Side::Left;
  int inputLoop = -1;  // boundary loop of the input mesh, or -1
};

struct CutComponent {
  HalfedgeMesh mesh;
  std::vector<int> vertexOrigin;  // input vertex of each component vertex
  std::vector<int> faceOrigin;    // input face of each component face
  std::vector<LoopLabel> loops;   // parallel to mesh.boundaryLoops()
};

// Cuts along disjoint simple interior cycles; curve vertices are duplicated
// once per side. Components are ordered by their smallest input face.
std::vector<CutComponent> cutAlong(const HalfedgeMesh& mesh, const std::vector<CutCurve>& curves);

} // namespace fnshape
