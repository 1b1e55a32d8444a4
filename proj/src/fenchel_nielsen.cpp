#include "fnshape/fenchel_nielsen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <string>

namespace fnshape {

namespace {

constexpr double kDriftLimit = 1e-6;

// Frames: the isometry F_h sends i to origin(h) and i e^l to dest(h), with
// face(h) on the side Re z < 0. Moving to a neighbouring halfedge multiplies
// the frame on the right by a step that only depends on the face geometry.
template <typename Real>
class Developer {
public:
  using Iso = hyp::BasicHolonomy<Real>;
  using Complex = std::complex<Real>;

  Developer(const HalfedgeMesh& mesh, const DiscreteMetric& metric) : mesh_(mesh), metric_(metric) {}

  Real length(int h) const { return Real(metric_.lengths[mesh_.edge(h)]); }

  // angle at origin(h)
  Real angleAtOrigin(int h) const {
    return Real(hyp::angle(metric_.lengths[mesh_.edge(mesh_.next(h))], metric_.lengths[mesh_.edge(h)],
                           metric_.lengths[mesh_.edge(mesh_.prev(h))]));
  }

  // F_next(h) = F_h * toNext(h)
  Iso toNext(int h) const {
    const Real beta = angleAtOrigin(mesh_.next(h));
    return hyp::translationAlongAxis<Real>(length(h)) * hyp::rotationAboutI<Real>(std::numbers::pi_v<Real> - beta);
  }

  // F_twin(h) = F_h * toTwin(h)
  Iso toTwin(int h) const { return hyp::halfTurn<Real>(length(h)); }

  std::array<Complex, 3> place(const Iso& frame, int h) const {
    std::array<Complex, 3> z;
    const int k = h % 3;
    z[k] = frame.apply(Complex(0, 1));
    z[(k + 1) % 3] = frame.apply(Complex(0, std::exp(length(h))));
    z[(k + 2) % 3] = frame.apply(hyp::pointAt<Real>(length(mesh_.prev(h)), angleAtOrigin(h)));
    return z;
  }

  const HalfedgeMesh& mesh() const { return mesh_; }

private:
  const HalfedgeMesh& mesh_;
  const DiscreteMetric& metric_;
};

int loopHalfedge(const HalfedgeMesh& mesh, const CutCurve& loop, int k) {
  const int m = loop.edgeCount();
  const int a = loop.vertices[k % m], b = loop.vertices[(k + 1) % m];
  const int h = mesh.findHalfedge(a, b);
  if (h < 0) fail(ErrorCode::CurveError, "loop vertices " + std::to_string(a) + " and " + std::to_string(b) +
                                             " are not joined by an edge");
  return h;
}

template <typename Real>
LaidOutStrip layoutWith(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const CutCurve& loop) {
  using Iso = hyp::BasicHolonomy<Real>;
  using Complex = std::complex<Real>;
  const Developer<Real> dev(mesh, metric);
  const int m = loop.edgeCount();
  if (m < 2) fail(ErrorCode::CurveError, "loop needs at least two edges");

  LaidOutStrip strip;
  strip.loop = loop;
  Real mismatch = 0;
  std::array<Complex, 3> last{};
  auto record = [&](const Iso& frame, int h) {
    const auto z = dev.place(frame, h);
    const int f = mesh.face(h);
    for (int k = 0; k < 3; ++k) {
      const int e = mesh.edge(3 * f + k);
      const Real err = std::abs(hyp::distance(z[k], z[(k + 1) % 3]) - Real(metric.lengths[e]));
      mismatch = std::max(mismatch, err / std::max(Real(1), Real(metric.lengths[e])));
    }
    if (!strip.triangles.empty()) {
      // the shared edge: origin and dest of h are also corners of the last face
      const auto& prevFace = mesh.triangle(strip.triangles.back().face);
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
          if (prevFace[j] == mesh.triangle(f)[k]) mismatch = std::max(mismatch, hyp::distance(z[k], last[j]));
    }
    last = z;
    PlacedTriangle placed;
    placed.face = f;
    for (int k = 0; k < 3; ++k) placed.corners[k] = std::complex<double>(double(z[k].real()), double(z[k].imag()));
    strip.triangles.push_back(placed);
  };

  Iso frame;
  int cur = loopHalfedge(mesh, loop, 0);
  record(frame, cur);
  for (int k = 0; k < m; ++k) {
    const int out = loopHalfedge(mesh, loop, k + 1);
    frame = frame * dev.toNext(cur);
    cur = mesh.next(cur);
    int guard = 0;
    while (cur != out) {
      const int t = mesh.twin(cur);
      if (t < 0 || ++guard > mesh.nHalfedges())
        fail(ErrorCode::CurveError, "loop runs along the boundary with the boundary on its left");
      frame = frame * dev.toTwin(cur);
      cur = t;
      record(frame, cur);
      frame = frame * dev.toNext(cur);
      cur = mesh.next(cur);
    }
  }
  strip.holonomy = frame.template cast<double>();
  strip.maxMismatch = double(mismatch);
  return strip;
}

// Frame change from halfedge `from` to halfedge `to` along a face path that
// stays inside `allowed` and never crosses a blocked edge.
template <typename Real>
hyp::BasicHolonomy<Real> transport(const Developer<Real>& dev, int from, int to, const std::vector<char>& allowed,
                                   const std::vector<char>& blockedEdge) {
  const HalfedgeMesh& mesh = dev.mesh();
  const int source = mesh.face(from), target = mesh.face(to);
  std::vector<int> via(mesh.nFaces(), -2); // halfedge crossed to enter the face
  via[source] = -1;
  std::queue<int> queue;
  queue.push(source);
  while (!queue.empty() && via[target] == -2) {
    const int f = queue.front();
    queue.pop();
    for (int k = 0; k < 3; ++k) {
      const int h = 3 * f + k;
      const int t = mesh.twin(h);
      if (t < 0 || blockedEdge[mesh.edge(h)]) continue;
      const int g = mesh.face(t);
      if (!allowed[g] || via[g] != -2) continue;
      via[g] = h;
      queue.push(g);
    }
  }
  if (via[target] == -2) fail(ErrorCode::GeometryError, "no face path between the cuffs inside the pants");
  std::vector<int> crossings;
  for (int f = target; via[f] >= 0; f = mesh.face(via[f])) crossings.push_back(via[f]);
  std::reverse(crossings.begin(), crossings.end());

  hyp::BasicHolonomy<Real> g;
  int cur = from;
  auto rotateTo = [&](int h) {
    while (cur != h) {
      g = g * dev.toNext(cur);
      cur = mesh.next(cur);
    }
  };
  for (int h : crossings) {
    rotateTo(h);
    g = g * dev.toTwin(h);
    cur = mesh.twin(h);
  }
  rotateTo(to);
  return g;
}

// A cuff of a pants as an oriented loop with the pants on its left.
CutCurve cuffLoop(const PantsDecomposition& d, const CuffSlot& slot) {
  const CutCurve& c = d.curves[slot.curve];
  return slot.side == Side::Left ? c : c.reversed();
}

// The other cuff a seam from `slot` runs to: smallest (curve, side).
int seamPartner(const Pants& pants, int slot) {
  int best = -1;
  for (int s = 0; s < 3; ++s) {
    if (s == slot) continue;
    const auto key = [&](int i) { return std::pair(pants.cuffs[i].curve, static_cast<int>(pants.cuffs[i].side)); };
    if (best < 0 || key(s) < key(best)) best = s;
  }
  return best;
}

struct PantsGeometry {
  std::vector<char> allowed;
  std::vector<char> blockedEdge;
};

PantsGeometry pantsRegion(const HalfedgeMesh& mesh, const PantsDecomposition& d, int pants) {
  PantsGeometry g;
  g.allowed.assign(mesh.nFaces(), 0);
  for (int f = 0; f < mesh.nFaces(); ++f) g.allowed[f] = d.facePants[f] == pants;
  g.blockedEdge.assign(mesh.nEdges(), 0);
  for (const auto& c : d.curves) {
    const int m = c.edgeCount();
    for (int k = 0; k < m; ++k) g.blockedEdge[mesh.edge(loopHalfedge(mesh, c, k))] = 1;
  }
  return g;
}

// Holonomy of cuff `other`, expressed in the frame of halfedge `base`. Both
// lie on cuffs of the same pants, with the pants on their left.
hyp::HolonomyTransform cuffInFrame(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const PantsGeometry& region,
                                   int base, const CutCurve& other) {
  const Developer<double> dev(mesh, metric);
  const auto strip = layoutStrip(mesh, metric, other);
  const auto g = transport(dev, base, loopHalfedge(mesh, other, 0), region.allowed, region.blockedEdge);
  return g * strip.holonomy * g.inverse();
}

} // namespace

LaidOutStrip layoutStrip(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const CutCurve& loop) {
  auto strip = layoutWith<double>(mesh, metric, loop);
  if (strip.maxMismatch <= kDriftLimit) return strip;
  strip = layoutWith<long double>(mesh, metric, loop);
  strip.extendedPrecision = true;
  if (strip.maxMismatch > kDriftLimit)
    fail(ErrorCode::NumericalDrift, "strip layout drifts by " + std::to_string(strip.maxMismatch) +
                                        " even in extended precision");
  return strip;
}

double geodesicLength(const LaidOutStrip& strip) { return hyp::translationLength(strip.holonomy); }

double combinatorialLength(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const CutCurve& loop) {
  double sum = 0.0;
  for (int k = 0; k < loop.edgeCount(); ++k) sum += metric.lengths[mesh.edge(loopHalfedge(mesh, loop, k))];
  return sum;
}

Twist cuffTwist(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const PantsDecomposition& decomposition,
                int curve, bool reversed) {
  if (curve < 0 || curve >= decomposition.interiorCount)
    fail(ErrorCode::CurveError, "twist requested for a curve that is not interior");
  const auto& adjacency = decomposition.adjacency[curve];
  const CutCurve loop = reversed ? decomposition.curves[curve].reversed() : decomposition.curves[curve];
  const Developer<double> dev(mesh, metric);
  const auto strip = layoutStrip(mesh, metric, loop);
  const auto axis = hyp::axisFrame(strip.holonomy);

  const int h0 = loopHalfedge(mesh, loop, 0);
  // feet[0] on the loop's left, feet[1] on its right
  double feet[2];
  for (int s = 0; s < 2; ++s) {
    // which decomposition side faces this side of the (possibly reversed) loop
    const bool leftOfStored = (s == 0) != reversed;
    const int pants = leftOfStored ? adjacency.leftPants : adjacency.rightPants;
    const int slot = leftOfStored ? adjacency.leftSlot : adjacency.rightSlot;
    const auto& p = decomposition.pants[pants];
    const CutCurve other = cuffLoop(decomposition, p.cuffs[seamPartner(p, slot)]);
    const auto region = pantsRegion(mesh, decomposition, pants);
    const int base = s == 0 ? h0 : mesh.twin(h0);
    const hyp::HolonomyTransform toBase = s == 0 ? hyp::HolonomyTransform() : dev.toTwin(h0);
    const auto otherHolonomy = toBase * cuffInFrame(mesh, metric, region, base, other) * toBase.inverse();
    feet[s] = hyp::commonPerpendicular(axis, otherHolonomy).footPosition;
  }
  Twist t;
  t.length = axis.translation;
  t.offset = std::remainder(feet[1] - feet[0], t.length);
  if (t.offset <= -t.length / 2) t.offset += t.length;
  t.angle = 2 * std::numbers::pi * t.offset / t.length;
  return t;
}

std::vector<SeamCheck> checkSeams(const HalfedgeMesh& mesh, const DiscreteMetric& metric,
                                  const PantsDecomposition& decomposition, const std::vector<double>& curveLengths) {
  if (curveLengths.size() != decomposition.curves.size())
    fail(ErrorCode::CountMismatch, "one length per decomposition curve expected");
  std::vector<SeamCheck> checks;
  for (int pi = 0; pi < static_cast<int>(decomposition.pants.size()); ++pi) {
    const auto& p = decomposition.pants[pi];
    const auto region = pantsRegion(mesh, decomposition, pi);
    for (int a = 0; a < 3; ++a) {
      const CutCurve loopA = cuffLoop(decomposition, p.cuffs[a]);
      const auto axis = hyp::axisFrame(layoutStrip(mesh, metric, loopA).holonomy);
      const int base = loopHalfedge(mesh, loopA, 0);
      for (int b = a + 1; b < 3; ++b) {
        const int c = 3 - a - b;
        const auto other = cuffInFrame(mesh, metric, region, base, cuffLoop(decomposition, p.cuffs[b]));
        SeamCheck check;
        check.pants = pi;
        check.slotA = a;
        check.slotB = b;
        check.predicted = hyp::pantsSeam(curveLengths[p.cuffs[a].curve], curveLengths[p.cuffs[b].curve],
                                         curveLengths[p.cuffs[c].curve]);
        check.measured = hyp::commonPerpendicular(axis, other).distance;
        checks.push_back(check);
      }
    }
  }
  return checks;
}

FNCoordinates assemble(const PantsDecomposition& decomposition, const std::vector<double>& curveLengths,
                       const std::vector<double>& twists, const SurfaceSignature& signature) {
  const int n = signature.boundaryCount;
  const int expected = 3 * signature.genus - 3 + n;
  if (decomposition.interiorCount != expected || decomposition.boundaryCount() != n)
    fail(ErrorCode::CountMismatch, "decomposition has " + std::to_string(decomposition.interiorCount) +
                                       " interior and " + std::to_string(decomposition.boundaryCount()) +
                                       " boundary curves, expected " + std::to_string(expected) + " and " +
                                       std::to_string(n));
  if (curveLengths.size() != decomposition.curves.size() || static_cast<int>(twists.size()) != expected)
    fail(ErrorCode::CountMismatch, "length or twist count differs from the curve count");
  FNCoordinates fn;
  fn.genus = signature.genus;
  fn.punctures = n;
  for (int i = 0; i < expected; ++i) {
    if (!(curveLengths[i] > 0)) fail(ErrorCode::GeometryError, "curve length is not positive");
    fn.pairs.push_back({curveLengths[i], twists[i]});
  }
  fn.boundaryLengths.assign(n, 0.0);
  return fn;
}

} // namespace fnshape
