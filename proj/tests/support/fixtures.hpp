#pragma once

#include <vector>

#include "fnshape/mesh.hpp"
#include "fnshape/pants.hpp"

// Generated meshes for tests and the acceptance run.
namespace fnshape::fixtures {

TriangleSoup tetrahedron();
TriangleSoup octahedron();
TriangleSoup icosahedron();
// Unit icosphere: icosahedron with `level` rounds of 1:4 subdivision,
// new vertices pushed to the sphere.
TriangleSoup icosphere(int level);

// Torus of revolution sampled on an nu x nv grid (u around the core circle,
// v around the tube). Vertex (i, j) has id i * nv + j. With `alternate` the
// quad diagonals alternate in a checkerboard, which makes the mesh symmetric
// under u -> -u. `shear` shifts the tube index by `shear` steps once around u,
// giving a combinatorially twisted gluing.
struct TorusOptions {
  int nu = 12;
  int nv = 6;
  double major = 3.0;
  double minor = 1.0;
  bool alternate = true;
  int shear = 0;
};
TriangleSoup torus(const TorusOptions& options);
inline int torusVertex(const TorusOptions& o, int i, int j) {
  return ((i % o.nu + o.nu) % o.nu) * o.nv + ((j % o.nv + o.nv) % o.nv);
}

// Closed genus-2 surface: the torus and its mirror image across the plane
// x = major + minor, each with the star of vertex (0, 0) removed, glued along
// the two link cycles. The result is symmetric under that reflection.
TriangleSoup doubleTorus(const TorusOptions& options);

// On a doubleTorus mesh: the glued link cycle, oriented with the first torus
// on its left, and the reflection as a vertex map.
CutCurve mirrorSeam(const HalfedgeMesh& mesh, const TorusOptions& options);
std::vector<int> mirrorMap(const HalfedgeMesh& mesh, const TorusOptions& options);

// Vertex closest to p.
int nearestVertex(const HalfedgeMesh& mesh, const Vec3& p);

// 1:4 midpoint subdivision; original vertices keep their ids.
TriangleSoup subdivide(const TriangleSoup& soup);

// Drops the faces around vertex v (and v itself); v must be interior.
TriangleSoup removeVertexStar(const TriangleSoup& soup, int v);

// Applies a vertex permutation: new id of old vertex v is perm[v]. Face order
// and corner rotation are shuffled too.
TriangleSoup relabel(const TriangleSoup& soup, const std::vector<int>& perm, unsigned seed);

// Moves every vertex radially by a factor in [1 - amount, 1 + amount].
TriangleSoup jitterRadially(const TriangleSoup& soup, double amount, unsigned seed);

TriangleSoup scaled(TriangleSoup soup, double factor);

} // namespace fnshape::fixtures
