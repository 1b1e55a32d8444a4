#include "fnshape/pants.hpp"

#include <algorithm>
#include <bitset>
#include <deque>
#include <limits>
#include <queue>

namespace fnshape {

namespace {

// Z2 intersection tests: 2g dual cycles spanning the homology of the capped
// surface, then b-1 dual arcs from boundary 0 to boundary j.
constexpr int kMaxTests = 256;
using Parity = std::bitset<kMaxTests>;

CutCurve canonicalRotation(CutCurve curve) {
  auto it = std::min_element(curve.vertices.begin(), curve.vertices.end());
  std::rotate(curve.vertices.begin(), it, curve.vertices.end());
  return curve;
}

std::vector<int> boundaryLoopOfHalfedge(const HalfedgeMesh& mesh) {
  std::vector<int> loopOf(mesh.nHalfedges(), -1);
  for (int j = 0; j < mesh.nBoundaryLoops(); ++j)
    for (int h : mesh.boundaryLoops()[j]) loopOf[h] = j;
  return loopOf;
}

// Primal BFS spanning tree over all vertices; returns the parent edge of each
// vertex (-1 at the root) and marks tree edges.
std::vector<int> primalTree(const HalfedgeMesh& mesh, std::vector<char>& inTree) {
  std::vector<int> parentEdge(mesh.nVertices(), -1);
  std::vector<char> seen(mesh.nVertices(), 0);
  inTree.assign(mesh.nEdges(), 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    auto out = mesh.outgoingHalfedges(v);
    std::vector<std::pair<int, int>> steps; // (neighbour, edge)
    for (int h : out) steps.emplace_back(mesh.dest(h), mesh.edge(h));
    if (mesh.isBoundaryVertex(v)) {
      const int in = mesh.prev(out.front());
      steps.emplace_back(mesh.origin(in), mesh.edge(in));
    }
    for (auto [w, e] : steps) {
      if (seen[w]) continue;
      seen[w] = 1;
      parentEdge[w] = e;
      inTree[e] = 1;
      queue.push(w);
    }
  }
  return parentEdge;
}

// Dual tree over faces plus `extraNodes` boundary nodes, avoiding primal tree
// edges. dualEnds(e) gives the two dual nodes of edge e.
struct DualTree {
  std::vector<int> parentEdge; // per node
  std::vector<int> parentNode;
  std::vector<int> depth;
  std::vector<char> inTree;    // per edge
};

template <typename Ends>
DualTree dualTree(const HalfedgeMesh& mesh, int nodes, const std::vector<char>& primalInTree, Ends dualEnds) {
  std::vector<std::vector<int>> incident(nodes);
  for (int e = 0; e < mesh.nEdges(); ++e) {
    if (primalInTree[e]) continue;
    auto [a, b] = dualEnds(e);
    incident[a].push_back(e);
    incident[b].push_back(e);
  }
  DualTree tree;
  tree.parentEdge.assign(nodes, -1);
  tree.parentNode.assign(nodes, -1);
  tree.depth.assign(nodes, -1);
  tree.inTree.assign(mesh.nEdges(), 0);
  std::queue<int> queue;
  queue.push(0);
  tree.depth[0] = 0;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop();
    for (int e : incident[x]) {
      auto [a, b] = dualEnds(e);
      const int y = a == x ? b : a;
      if (tree.depth[y] >= 0) continue;
      tree.depth[y] = tree.depth[x] + 1;
      tree.parentNode[y] = x;
      tree.parentEdge[y] = e;
      tree.inTree[e] = 1;
      queue.push(y);
    }
  }
  for (int x = 0; x < nodes; ++x)
    if (tree.depth[x] < 0) fail(ErrorCode::TopologyError, "dual graph is disconnected");
  return tree;
}

// Primal tree path edges between the tree root and v, as a vertex chain.
std::vector<int> rootPath(const HalfedgeMesh& mesh, const std::vector<int>& parentEdge, int v) {
  std::vector<int> chain{v};
  while (parentEdge[v] >= 0) {
    const int h = mesh.edgeHalfedge(parentEdge[v]);
    v = mesh.origin(h) == v ? mesh.dest(h) : mesh.origin(h);
    chain.push_back(v);
  }
  return chain;
}

struct IntersectionTests {
  int genusTests = 0;    // 2g
  int boundaryTests = 0; // b - 1
  std::vector<Parity> edgeMask;
};

IntersectionTests intersectionTests(const HalfedgeMesh& mesh, int genus) {
  const int nf = mesh.nFaces();
  const int b = mesh.nBoundaryLoops();
  IntersectionTests tests;
  tests.genusTests = 2 * genus;
  tests.boundaryTests = std::max(b - 1, 0);
  if (tests.genusTests + tests.boundaryTests > kMaxTests)
    fail(ErrorCode::TopologyError, "surface too complex for the intersection tests");
  tests.edgeMask.assign(mesh.nEdges(), Parity{});

  const auto loopOf = boundaryLoopOfHalfedge(mesh);
  auto dualEnds = [&](int e) {
    const int h = mesh.edgeHalfedge(e);
    const int t = mesh.twin(h);
    return std::pair<int, int>{mesh.face(h), t >= 0 ? mesh.face(t) : nf + loopOf[h]};
  };
  std::vector<char> primalInTree;
  primalTree(mesh, primalInTree);
  const auto tree = dualTree(mesh, nf + b, primalInTree, dualEnds);

  auto togglePath = [&](int x, int y, int bit) {
    while (x != y) {
      if (tree.depth[x] < tree.depth[y]) std::swap(x, y);
      tests.edgeMask[tree.parentEdge[x]].flip(bit);
      x = tree.parentNode[x];
    }
  };

  int bit = 0;
  for (int e = 0; e < mesh.nEdges(); ++e) {
    if (primalInTree[e] || tree.inTree[e]) continue;
    if (bit >= tests.genusTests) fail(ErrorCode::TopologyError, "tree-cotree leftover count exceeds 2g");
    auto [a, c] = dualEnds(e);
    tests.edgeMask[e].flip(bit);
    togglePath(a, c, bit);
    ++bit;
  }
  if (bit != tests.genusTests) fail(ErrorCode::TopologyError, "tree-cotree leftover count differs from 2g");
  for (int j = 1; j < b; ++j) togglePath(nf, nf + j, tests.genusTests + j - 1);
  return tests;
}

bool isEssentialSplit(const IntersectionTests& tests, const Parity& parity) {
  for (int k = 0; k < tests.genusTests; ++k)
    if (parity[k]) return true; // non-separating
  // separating: needs two input boundaries on each side, otherwise one side
  // is a disc, an annulus or a handle
  if (tests.boundaryTests == 0) return false;
  int opposite = 0;
  for (int j = 0; j < tests.boundaryTests; ++j) opposite += parity[tests.genusTests + j] ? 1 : 0;
  const int same = 1 + tests.boundaryTests - opposite;
  return same >= 2 && opposite >= 2;
}

std::vector<int> distanceFrom(const HalfedgeMesh& mesh, const std::vector<char>& source) {
  std::vector<int> dist(mesh.nVertices(), std::numeric_limits<int>::max());
  std::queue<int> queue;
  for (int v = 0; v < mesh.nVertices(); ++v)
    if (source[v]) {
      dist[v] = 0;
      queue.push(v);
    }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int w : mesh.neighbors(v))
      if (dist[w] == std::numeric_limits<int>::max()) {
        dist[w] = dist[v] + 1;
        queue.push(w);
      }
  }
  return dist;
}

// Graph distance from every vertex to the boundary (a large value on closed
// meshes).
std::vector<int> boundaryClearance(const HalfedgeMesh& mesh) {
  std::vector<char> onBoundary(mesh.nVertices());
  for (int v = 0; v < mesh.nVertices(); ++v) onBoundary[v] = mesh.isBoundaryVertex(v);
  return distanceFrom(mesh, onBoundary);
}

std::vector<int> regionBoundaryCycle(const HalfedgeMesh& mesh, const std::vector<char>& region,
                                     const std::vector<int>& loopOfVertex);

// Cycle around a thickened arc: the vertices at distance `radius` from the
// union of loop i, a shortest path to loop j and loop j. On a genus-0
// component it cuts off a pair of pants holding loops i and j whenever it is
// a single simple cycle. Returns an empty vector otherwise.
std::vector<int> tubeAround(const HalfedgeMesh& mesh, int loopI, int loopJ, const std::vector<int>& loopOfVertex,
                            int radius) {
  const int nv = mesh.nVertices();
  std::vector<char> others(nv, 0);
  for (int v = 0; v < nv; ++v) others[v] = loopOfVertex[v] >= 0 && loopOfVertex[v] != loopI && loopOfVertex[v] != loopJ;
  const auto otherDistance = distanceFrom(mesh, others);

  std::vector<int> parent(nv, -2);
  std::queue<int> queue;
  for (int v = 0; v < nv; ++v)
    if (loopOfVertex[v] == loopI) {
      parent[v] = -1;
      queue.push(v);
    }
  int reached = -1;
  while (!queue.empty() && reached < 0) {
    const int v = queue.front();
    queue.pop();
    for (int w : mesh.neighbors(v)) {
      if (parent[w] != -2) continue;
      if (loopOfVertex[w] == loopJ) {
        parent[w] = v;
        reached = w;
        break;
      }
      if (loopOfVertex[w] >= 0 || otherDistance[w] < 2 * radius) continue;
      parent[w] = v;
      queue.push(w);
    }
  }
  if (reached < 0) return {};

  std::vector<char> core(nv, 0);
  for (int v = 0; v < nv; ++v)
    if (loopOfVertex[v] == loopI || loopOfVertex[v] == loopJ) core[v] = 1;
  for (int v = reached; v >= 0; v = parent[v]) core[v] = 1;
  const auto coreDistance = distanceFrom(mesh, core);
  std::vector<char> region(mesh.nFaces(), 0);
  for (int f = 0; f < mesh.nFaces(); ++f)
    for (int v : mesh.triangle(f))
      if (coreDistance[v] < radius) region[f] = 1;

  return regionBoundaryCycle(mesh, region, loopOfVertex);
}

// The inner boundary of a face set, if it is one simple cycle clear of every
// boundary loop.
std::vector<int> regionBoundaryCycle(const HalfedgeMesh& mesh, const std::vector<char>& region,
                                     const std::vector<int>& loopOfVertex) {
  const int nv = mesh.nVertices();
  std::vector<int> nextOf(nv, -1);
  int start = -1, edges = 0;
  for (int h = 0; h < mesh.nHalfedges(); ++h) {
    if (!region[mesh.face(h)]) continue;
    const int t = mesh.twin(h);
    if (t < 0 || region[mesh.face(t)]) continue;
    const int v = mesh.origin(h);
    if (nextOf[v] >= 0 || loopOfVertex[v] >= 0) return {}; // pinched or touching a loop
    nextOf[v] = mesh.dest(h);
    if (start < 0 || v < start) start = v;
    ++edges;
  }
  if (start < 0) return {};
  std::vector<int> cycle;
  for (int v = start; cycle.empty() || v != start; v = nextOf[v]) {
    if (v < 0 || static_cast<int>(cycle.size()) > edges) return {};
    cycle.push_back(v);
  }
  if (static_cast<int>(cycle.size()) != edges) return {}; // more than one cycle
  return cycle;
}

// The faces closer to loops i and j than to the others (ties going to the
// pair or, failing that, to the others) form the union of two neighbouring
// cells. Their inner boundary runs midway between {i, j} and the rest.
std::vector<std::vector<int>> bisectorsAround(const HalfedgeMesh& mesh, int loopI, int loopJ,
                                              const std::vector<int>& loopOfVertex) {
  const int nv = mesh.nVertices();
  std::vector<char> pair(nv), others(nv);
  for (int v = 0; v < nv; ++v) {
    pair[v] = loopOfVertex[v] == loopI || loopOfVertex[v] == loopJ;
    others[v] = loopOfVertex[v] >= 0 && !pair[v];
  }
  const auto toPair = distanceFrom(mesh, pair);
  const auto toOthers = distanceFrom(mesh, others);
  std::vector<std::vector<int>> cycles;
  for (int slack : {0, 1}) {
    std::vector<char> region(mesh.nFaces(), 1);
    for (int f = 0; f < mesh.nFaces(); ++f)
      for (int v : mesh.triangle(f))
        if (toPair[v] >= toOthers[v] + slack) region[f] = 0;
    auto cycle = regionBoundaryCycle(mesh, region, loopOfVertex);
    if (!cycle.empty()) cycles.push_back(std::move(cycle));
  }
  return cycles;
}

// Shortest essential simple cycle through vertices at least minClearance
// away from the boundary, found by a BFS from every such vertex. Only non-separating cycles and cycles with
// at least two boundary loops on each side qualify; both always exist when
// the component is not yet a pair of pants. Among cycles of equal length the
// one staying farthest from the boundary wins, which leaves room for the
// curves still to come.
std::vector<int> shortestSplittingCycle(const HalfedgeMesh& mesh, const SurfaceSignature& sig,
                                        const IntersectionTests& tests, const std::vector<int>& clearance,
                                        int minClearance) {
  const int nv = mesh.nVertices();
  std::vector<char> interior(nv);
  for (int v = 0; v < nv; ++v) interior[v] = clearance[v] >= minClearance;

  std::vector<std::vector<std::pair<int, int>>> adjacency(nv); // (neighbour, edge)
  for (int v = 0; v < nv; ++v) {
    if (!interior[v]) continue;
    for (int h : mesh.outgoingHalfedges(v))
      if (interior[mesh.dest(h)]) adjacency[v].emplace_back(mesh.dest(h), mesh.edge(h));
  }

  int bestLength = std::numeric_limits<int>::max();
  int bestClearance = -1;
  std::vector<int> best;

  std::vector<int> depth(nv, -1), parent(nv, -1), branch(nv, -1), pathClearance(nv, 0);
  std::vector<Parity> parity(nv);
  std::vector<int> touched;
  std::vector<int> order;
  for (int s = 0; s < nv; ++s) {
    if (!interior[s]) continue;
    for (int v : touched) depth[v] = -1;
    touched.clear();
    order.clear();
    depth[s] = 0;
    parent[s] = -1;
    branch[s] = -1;
    pathClearance[s] = clearance[s];
    parity[s].reset();
    touched.push_back(s);
    order.push_back(s);
    for (size_t head = 0; head < order.size(); ++head) {
      const int a = order[head];
      if (2 * depth[a] > bestLength) break;
      for (auto [b, e] : adjacency[a]) {
        if (depth[b] < 0) {
          depth[b] = depth[a] + 1;
          parent[b] = a;
          branch[b] = a == s ? b : branch[a];
          pathClearance[b] = std::min(pathClearance[a], clearance[b]);
          parity[b] = parity[a] ^ tests.edgeMask[e];
          touched.push_back(b);
          order.push_back(b);
          continue;
        }
        if (b == parent[a] || a == s || b == s || branch[a] == branch[b]) continue;
        const int length = depth[a] + depth[b] + 1;
        const int clear = std::min(pathClearance[a], pathClearance[b]);
        if (length > bestLength || (length == bestLength && clear <= bestClearance)) continue;
        if (!isEssentialSplit(tests, parity[a] ^ parity[b] ^ tests.edgeMask[e])) continue;
        bestLength = length;
        bestClearance = clear;
        best.clear();
        for (int v = a; v >= 0; v = parent[v]) best.push_back(v);
        std::reverse(best.begin(), best.end()); // s ... a
        for (int v = b; v != s; v = parent[v]) best.push_back(v);
      }
    }
  }
  // Separating curves need not be two shortest paths plus an edge, so on
  // genus-0 components also try tubes around pairs of loops.
  if (sig.genus == 0) {
    std::vector<int> loopOfVertex(nv, -1);
    for (int j = 0; j < mesh.nBoundaryLoops(); ++j)
      for (int v : mesh.boundaryLoopVertices(j)) loopOfVertex[v] = j;
    for (int i = 0; i < mesh.nBoundaryLoops(); ++i)
      for (int j = i + 1; j < mesh.nBoundaryLoops(); ++j) {
        auto cycle = tubeAround(mesh, i, j, loopOfVertex, minClearance);
        for (int v : cycle)
          if (clearance[v] < minClearance) cycle.clear();
        const int length = static_cast<int>(cycle.size());
        if (cycle.empty() || length >= bestLength) continue;
        Parity p;
        const int m = length;
        for (int k = 0; k < m; ++k) p ^= tests.edgeMask[mesh.edge(mesh.findHalfedge(cycle[k], cycle[(k + 1) % m]))];
        if (!isEssentialSplit(tests, p)) continue;
        bestLength = length;
        best = std::move(cycle);
      }
  }
  return best;
}

// Curves keeping a vertex of clearance from the current boundary leave room
// for the cuts that follow; curves touching the boundary's neighbours are the
// fallback.
std::vector<int> findSplittingCycle(const HalfedgeMesh& mesh, const SurfaceSignature& sig) {
  const auto tests = intersectionTests(mesh, sig.genus);
  const auto clearance = boundaryClearance(mesh);
  if (sig.genus == 0) {
    // Bisectors keep the most room to every loop, so later cuts stay simple.
    std::vector<int> loopOfVertex(mesh.nVertices(), -1);
    for (int j = 0; j < mesh.nBoundaryLoops(); ++j)
      for (int v : mesh.boundaryLoopVertices(j)) loopOfVertex[v] = j;
    std::vector<int> best;
    for (int i = 0; i < mesh.nBoundaryLoops(); ++i)
      for (int j = i + 1; j < mesh.nBoundaryLoops(); ++j)
        for (auto& cycle : bisectorsAround(mesh, i, j, loopOfVertex)) {
        if (!best.empty() && cycle.size() >= best.size()) continue;
        Parity p;
        const int m = static_cast<int>(cycle.size());
        for (int k = 0; k < m; ++k) p ^= tests.edgeMask[mesh.edge(mesh.findHalfedge(cycle[k], cycle[(k + 1) % m]))];
        if (isEssentialSplit(tests, p)) best = std::move(cycle);
      }
    if (!best.empty()) return best;
  }
  for (int minClearance : {3, 2, 1}) {
    auto cycle = shortestSplittingCycle(mesh, sig, tests, clearance, minClearance);
    if (!cycle.empty()) return cycle;
  }
  fail(ErrorCode::RefinementNeeded, "no essential simple cycle avoids the boundary of a component with g=" +
                                        std::to_string(sig.genus) + ", b=" + std::to_string(sig.boundaryCount) +
                                        "; refine the mesh");
}

void checkCurves(const HalfedgeMesh& mesh, const std::vector<CutCurve>& curves) {
  std::vector<int> owner(mesh.nVertices(), -1);
  for (int c = 0; c < static_cast<int>(curves.size()); ++c) {
    const auto& vs = curves[c].vertices;
    const int m = static_cast<int>(vs.size());
    if (m < 3) fail(ErrorCode::CurveError, "curve " + std::to_string(c) + " has fewer than 3 vertices");
    for (int i = 0; i < m; ++i) {
      const int v = vs[i];
      if (v < 0 || v >= mesh.nVertices()) fail(ErrorCode::CurveError, "curve vertex out of range");
      if (mesh.isBoundaryVertex(v))
        fail(ErrorCode::CurveError, "curve " + std::to_string(c) + " touches the boundary at vertex " + std::to_string(v));
      if (owner[v] == c) fail(ErrorCode::CurveError, "curve " + std::to_string(c) + " is not simple");
      if (owner[v] >= 0)
        fail(ErrorCode::CurveError, "curves " + std::to_string(owner[v]) + " and " + std::to_string(c) + " intersect");
      owner[v] = c;
      if (mesh.findHalfedge(v, vs[(i + 1) % m]) < 0)
        fail(ErrorCode::CurveError, "curve " + std::to_string(c) + " steps across a non-edge");
    }
  }
}

} // namespace

CutCurve CutCurve::reversed() const {
  CutCurve out = *this;
  std::reverse(out.vertices.begin() + 1, out.vertices.end());
  return out;
}

std::vector<CutCurve> homotopyGenerators(const HalfedgeMesh& mesh) {
  const auto sig = signature(mesh);
  if (!sig.admissible()) fail(ErrorCode::TopologyError, "surface does not satisfy 2g-2+b > 0");
  const int nf = mesh.nFaces();
  const bool hasBoundary = mesh.nBoundaryLoops() > 0;
  // all boundary loops share one outside node
  auto dualEnds = [&](int e) {
    const int h = mesh.edgeHalfedge(e);
    const int t = mesh.twin(h);
    return std::pair<int, int>{mesh.face(h), t >= 0 ? mesh.face(t) : nf};
  };
  std::vector<char> primalInTree;
  const auto parentEdge = primalTree(mesh, primalInTree);
  const auto tree = dualTree(mesh, nf + (hasBoundary ? 1 : 0), primalInTree, dualEnds);

  std::vector<CutCurve> out;
  for (int e = 0; e < mesh.nEdges(); ++e) {
    if (primalInTree[e] || tree.inTree[e]) continue;
    const int h = mesh.edgeHalfedge(e);
    auto pa = rootPath(mesh, parentEdge, mesh.origin(h));
    auto pb = rootPath(mesh, parentEdge, mesh.dest(h));
    // strip the shared tail above the lowest common ancestor
    while (pa.size() > 1 && pb.size() > 1 && pa[pa.size() - 2] == pb[pb.size() - 2]) {
      pa.pop_back();
      pb.pop_back();
    }
    CutCurve curve;
    // origin ... lca ... dest, closed by the leftover edge
    curve.vertices.assign(pa.begin(), pa.end());
    for (auto it = pb.rbegin() + 1; it != pb.rend(); ++it) curve.vertices.push_back(*it);
    out.push_back(canonicalRotation(std::move(curve)));
  }
  const int expected = 2 * sig.genus + std::max(sig.boundaryCount - 1, 0);
  if (static_cast<int>(out.size()) != expected)
    fail(ErrorCode::TopologyError, "tree-cotree produced " + std::to_string(out.size()) + " generators, expected " +
                                       std::to_string(expected));
  return out;
}

std::vector<CutComponent> cutAlong(const HalfedgeMesh& mesh, const std::vector<CutCurve>& curves) {
  checkCurves(mesh, curves);
  const int nv = mesh.nVertices();

  std::vector<char> cutEdge(mesh.nEdges(), 0);
  std::vector<int> curveOf(nv, -1);
  std::vector<int> leftCorner(nv, -1); // outgoing halfedge whose face is left of the curve
  for (int c = 0; c < static_cast<int>(curves.size()); ++c) {
    const auto& vs = curves[c].vertices;
    const int m = static_cast<int>(vs.size());
    for (int i = 0; i < m; ++i) {
      const int h = mesh.findHalfedge(vs[i], vs[(i + 1) % m]);
      cutEdge[mesh.edge(h)] = 1;
      curveOf[vs[i]] = c;
      leftCorner[vs[i]] = h;
    }
  }

  // Split every vertex star into wedges separated by cut edges.
  std::vector<int> cornerVertex(mesh.nHalfedges(), -1); // new vertex of the corner at origin(h)
  std::vector<int> newOrigin;
  std::vector<Side> newSide;
  std::vector<int> firstNew(nv + 1, 0);
  for (int v = 0; v < nv; ++v) {
    firstNew[v] = static_cast<int>(newOrigin.size());
    const auto out = mesh.outgoingHalfedges(v);
    const int d = static_cast<int>(out.size());
    int start = 0;
    if (!mesh.isBoundaryVertex(v)) {
      for (int i = 0; i < d; ++i)
        if (cutEdge[mesh.edge(out[(i + d - 1) % d])]) {
          start = i;
          break;
        }
    }
    int current = -1;
    for (int step = 0; step < d; ++step) {
      const int i = (start + step) % d;
      if (current < 0 || cutEdge[mesh.edge(out[(i + d - 1) % d])]) {
        current = static_cast<int>(newOrigin.size());
        newOrigin.push_back(v);
        newSide.push_back(Side::Left);
      }
      cornerVertex[out[i]] = current;
    }
  }
  firstNew[nv] = static_cast<int>(newOrigin.size());
  for (int v = 0; v < nv; ++v)
    if (curveOf[v] >= 0) {
      const int left = cornerVertex[leftCorner[v]];
      for (int w = firstNew[v]; w < firstNew[v + 1]; ++w) newSide[w] = w == left ? Side::Left : Side::Right;
    }

  // Face components across uncut edges.
  std::vector<int> component(mesh.nFaces(), -1);
  int nComponents = 0;
  for (int f = 0; f < mesh.nFaces(); ++f) {
    if (component[f] >= 0) continue;
    std::queue<int> queue;
    queue.push(f);
    component[f] = nComponents;
    while (!queue.empty()) {
      const int g = queue.front();
      queue.pop();
      for (int k = 0; k < 3; ++k) {
        const int h = 3 * g + k;
        const int t = mesh.twin(h);
        if (t < 0 || cutEdge[mesh.edge(h)] || component[mesh.face(t)] >= 0) continue;
        component[mesh.face(t)] = nComponents;
        queue.push(mesh.face(t));
      }
    }
    ++nComponents;
  }

  std::vector<int> inputLoopOfVertex(nv, -1);
  for (int j = 0; j < mesh.nBoundaryLoops(); ++j)
    for (int v : mesh.boundaryLoopVertices(j)) inputLoopOfVertex[v] = j;

  std::vector<CutComponent> result(nComponents);
  for (int c = 0; c < nComponents; ++c) {
    std::vector<int> local(newOrigin.size(), -1);
    std::vector<char> used(newOrigin.size(), 0);
    std::vector<int> faces;
    for (int f = 0; f < mesh.nFaces(); ++f)
      if (component[f] == c) {
        faces.push_back(f);
        for (int k = 0; k < 3; ++k) used[cornerVertex[3 * f + k]] = 1;
      }
    auto& comp = result[c];
    std::vector<Vec3> positions;
    std::vector<int> globalOfLocal;
    for (int w = 0; w < static_cast<int>(newOrigin.size()); ++w)
      if (used[w]) {
        local[w] = static_cast<int>(positions.size());
        positions.push_back(mesh.position(newOrigin[w]));
        comp.vertexOrigin.push_back(newOrigin[w]);
        globalOfLocal.push_back(w);
      }
    std::vector<Triangle> triangles;
    for (int f : faces)
      triangles.push_back({local[cornerVertex[3 * f]], local[cornerVertex[3 * f + 1]], local[cornerVertex[3 * f + 2]]});
    comp.faceOrigin = faces;
    comp.mesh = HalfedgeMesh::build(std::move(positions), std::move(triangles));
    for (int j = 0; j < comp.mesh.nBoundaryLoops(); ++j) {
      const int first = comp.mesh.origin(comp.mesh.boundaryLoops()[j].front());
      const int w = globalOfLocal[first];
      LoopLabel label;
      if (curveOf[newOrigin[w]] >= 0) {
        label.curve = curveOf[newOrigin[w]];
        label.side = newSide[w];
      } else {
        label.inputLoop = inputLoopOfVertex[newOrigin[w]];
      }
      comp.loops.push_back(label);
    }
  }
  return result;
}

namespace {

struct WorkItem {
  CutComponent component;
  std::vector<CuffSlot> loopSlots; // slot of each boundary loop; boundary curves use -1-j
};

PantsDecomposition finalize(const HalfedgeMesh& mesh, std::vector<CutCurve> interior, std::vector<Pants> pants) {
  PantsDecomposition out;
  out.interiorCount = static_cast<int>(interior.size());
  const int nInterior = out.interiorCount;
  out.curves = std::move(interior);
  for (int j = 0; j < mesh.nBoundaryLoops(); ++j) {
    CutCurve c;
    c.vertices = mesh.boundaryLoopVertices(j);
    c.kind = CurveKind::Boundary;
    out.curves.push_back(std::move(c));
  }
  for (auto& p : pants)
    for (auto& slot : p.cuffs)
      if (slot.curve < 0) slot.curve = nInterior + (-1 - slot.curve);
  out.pants = std::move(pants);

  out.adjacency.assign(out.curves.size(), {});
  auto fillAdjacency = [&]() {
    out.adjacency.assign(out.curves.size(), {});
    for (int p = 0; p < static_cast<int>(out.pants.size()); ++p)
      for (int s = 0; s < 3; ++s) {
        const auto& slot = out.pants[p].cuffs[s];
        auto& adj = out.adjacency[slot.curve];
        if (slot.side == Side::Left) {
          adj.leftPants = p;
          adj.leftSlot = s;
        } else {
          adj.rightPants = p;
          adj.rightSlot = s;
        }
      }
  };
  fillAdjacency();
  // lower indexed pants on the left
  for (int c = 0; c < nInterior; ++c) {
    const auto adj = out.adjacency[c];
    if (adj.leftPants > adj.rightPants) {
      out.curves[c] = out.curves[c].reversed();
      auto& l = out.pants[adj.leftPants].cuffs[adj.leftSlot];
      auto& r = out.pants[adj.rightPants].cuffs[adj.rightSlot];
      l.side = Side::Right;
      r.side = Side::Left;
    }
  }
  fillAdjacency();
  for (int c = 0; c < static_cast<int>(out.curves.size()); ++c) {
    const auto& adj = out.adjacency[c];
    const bool interiorCurve = c < nInterior;
    if (adj.leftPants < 0 || (interiorCurve != (adj.rightPants >= 0)))
      fail(ErrorCode::TopologyError, "curve " + std::to_string(c) + " is not bounded by the expected cuff slots");
  }
  out.facePants.assign(mesh.nFaces(), -1);
  for (int p = 0; p < static_cast<int>(out.pants.size()); ++p)
    for (int f : out.pants[p].faces) out.facePants[f] = p;
  return out;
}

std::vector<CuffSlot> inheritSlots(const CutComponent& piece, int curveIndex, const std::vector<CuffSlot>& parentSlots,
                                   const HalfedgeMesh& parent) {
  std::vector<CuffSlot> slots;
  for (const auto& label : piece.loops) {
    if (label.curve >= 0) {
      slots.push_back({curveIndex, label.side});
    } else {
      (void)parent;
      slots.push_back(parentSlots[label.inputLoop]);
    }
  }
  return slots;
}

PantsDecomposition decompose(const HalfedgeMesh& mesh, const std::vector<CutCurve>* prescribed) {
  const auto sig = signature(mesh);
  if (!sig.admissible())
    fail(ErrorCode::TopologyError, "pants decomposition needs 2g-2+b > 0 (g=" + std::to_string(sig.genus) +
                                       ", b=" + std::to_string(sig.boundaryCount) + ")");

  std::vector<CutCurve> interior;
  std::vector<Pants> pants;
  std::deque<WorkItem> queue;

  WorkItem root;
  if (prescribed) {
    interior = *prescribed;
    for (auto& c : interior) c.kind = CurveKind::Interior;
    auto pieces = cutAlong(mesh, interior);
    for (auto& piece : pieces) {
      WorkItem item;
      for (const auto& label : piece.loops)
        item.loopSlots.push_back(label.curve >= 0 ? CuffSlot{label.curve, label.side} : CuffSlot{-1 - label.inputLoop, Side::Left});
      item.component = std::move(piece);
      queue.push_back(std::move(item));
    }
  } else {
    auto pieces = cutAlong(mesh, {});
    root.component = std::move(pieces.front());
    for (int j = 0; j < mesh.nBoundaryLoops(); ++j) root.loopSlots.push_back({-1 - j, Side::Left});
    queue.push_back(std::move(root));
  }

  while (!queue.empty()) {
    WorkItem item = std::move(queue.front());
    queue.pop_front();
    const auto& comp = item.component;
    const auto csig = signature(comp.mesh);
    if (csig.genus == 0 && csig.boundaryCount == 3) {
      Pants p;
      for (int s = 0; s < 3; ++s) p.cuffs[s] = item.loopSlots[s];
      p.faces = comp.faceOrigin;
      pants.push_back(std::move(p));
      continue;
    }
    if (!csig.admissible() || prescribed)
      fail(ErrorCode::TopologyError, "component with g=" + std::to_string(csig.genus) + ", b=" +
                                         std::to_string(csig.boundaryCount) + " is not a pair of pants");

    const auto cycle = findSplittingCycle(comp.mesh, csig);
    const int curveIndex = static_cast<int>(interior.size());
    CutCurve local;
    local.vertices = cycle;
    CutCurve global;
    for (int v : cycle) global.vertices.push_back(comp.vertexOrigin[v]);
    // keep the orientation, start at the smallest mesh vertex
    global = canonicalRotation(std::move(global));
    interior.push_back(global);

    auto pieces = cutAlong(comp.mesh, {local});
    int chiSum = 0;
    for (const auto& piece : pieces) {
      const auto psig = signature(piece.mesh);
      chiSum += piece.mesh.eulerCharacteristic();
      if (!psig.admissible())
        fail(ErrorCode::TopologyError, "cut produced a disc or annulus; the splitting cycle is not essential");
    }
    if (chiSum != comp.mesh.eulerCharacteristic()) fail(ErrorCode::TopologyError, "cut changed the Euler characteristic");
    for (auto& piece : pieces) {
      WorkItem next;
      next.loopSlots = inheritSlots(piece, curveIndex, item.loopSlots, comp.mesh);
      for (auto& v : piece.vertexOrigin) v = comp.vertexOrigin[v];
      for (auto& f : piece.faceOrigin) f = comp.faceOrigin[f];
      next.component = std::move(piece);
      queue.push_back(std::move(next));
    }
  }

  auto out = finalize(mesh, std::move(interior), std::move(pants));
  const int expectedInterior = 3 * sig.genus - 3 + sig.boundaryCount;
  const int expectedPants = 2 * sig.genus - 2 + sig.boundaryCount;
  if (out.interiorCount != expectedInterior || static_cast<int>(out.pants.size()) != expectedPants)
    fail(ErrorCode::TopologyError, "decomposition has " + std::to_string(out.interiorCount) + " curves and " +
                                       std::to_string(out.pants.size()) + " pants, expected " +
                                       std::to_string(expectedInterior) + " and " + std::to_string(expectedPants));
  return out;
}

} // namespace

PantsDecomposition pantsDecompose(const HalfedgeMesh& mesh) { return decompose(mesh, nullptr); }

PantsDecomposition decomposeAlong(const HalfedgeMesh& mesh, std::vector<CutCurve> interiorCurves) {
  for (auto& c : interiorCurves) c = canonicalRotation(std::move(c));
  return decompose(mesh, &interiorCurves);
}

} // namespace fnshape
