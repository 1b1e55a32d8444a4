#pragma once

#include <array>
#include <complex>
#include <vector>

#include "fnshape/hyperbolic.hpp"
#include "fnshape/pants.hpp"
#include "fnshape/ricci_flow.hpp"

namespace fnshape {

// Placement of one face in the upper half-plane, corners in face order.
struct PlacedTriangle {
  int face = -1;
  std::array<std::complex<double>, 3> corners;
};

// Faces to the left of a closed loop, developed one after the other starting
// from the standard frame of the loop's first halfedge (origin at i, second
// vertex straight above it). The holonomy maps that first frame to the frame
// reached after one lap.
struct LaidOutStrip {
  CutCurve loop;
  std::vector<PlacedTriangle> triangles;
  hyp::HolonomyTransform holonomy;
  double maxMismatch = 0.0; // largest shared-vertex or side length error
  bool extendedPrecision = false;
};

// Throws NumericalDrift if the layout does not close up to 1e-6 even in long
// double, CurveError if consecutive loop vertices are not adjacent.
LaidOutStrip layoutStrip(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const CutCurve& loop);

// Translation length of the strip's holonomy; NotHyperbolic for loops that
// are inessential or sit on an unconverged metric.
double geodesicLength(const LaidOutStrip& strip);

// Sum of the metric lengths of the loop's edges.
double combinatorialLength(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const CutCurve& loop);

struct Twist {
  double angle = 0.0;  // 2 pi offset / length
  double offset = 0.0; // signed distance between the seam feet, in (-l/2, l/2]
  double length = 0.0; // geodesic length of the curve
};

// Twist at an interior curve. On each side the seam runs to the adjacent
// pants' other cuff with the smallest (curve, side); the offset goes from the
// left foot to the right foot along the curve's orientation, which is the
// direction of a left turn when crossing from the left side to the right.
// The reversed flag measures the curve with its orientation flipped.
Twist cuffTwist(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const PantsDecomposition& decomposition,
                int curve, bool reversed = false);

// Seam between two cuffs of one pants: predicted from the three geodesic cuff
// lengths and measured as the common perpendicular of the developed axes.
struct SeamCheck {
  int pants = -1;
  int slotA = -1, slotB = -1;
  double predicted = 0.0;
  double measured = 0.0;
};

std::vector<SeamCheck> checkSeams(const HalfedgeMesh& mesh, const DiscreteMetric& metric,
                                  const PantsDecomposition& decomposition, const std::vector<double>& curveLengths);

struct FNPair {
  double length = 0.0;
  double twist = 0.0;
  bool operator==(const FNPair&) const = default;
};

struct FNCoordinates {
  int genus = 0;
  int punctures = 0;
  std::vector<FNPair> pairs;          // one per interior curve, decomposition order
  std::vector<double> boundaryLengths; // one per puncture, always 0

  int dimension() const { return 2 * static_cast<int>(pairs.size()); }
};

// curveLengths: one per decomposition curve (interior and boundary);
// twists: one per interior curve. Throws CountMismatch when the counts do not
// match 3g-3+n and n.
FNCoordinates assemble(const PantsDecomposition& decomposition, const std::vector<double>& curveLengths,
                       const std::vector<double>& twists, const SurfaceSignature& signature);

} // namespace fnshape
