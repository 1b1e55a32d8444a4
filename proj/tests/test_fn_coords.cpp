#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "fnshape/fenchel_nielsen.hpp"

using namespace fnshape;
namespace fx = fnshape::fixtures;

namespace {

constexpr double kPi = std::numbers::pi;

struct Converged {
  HalfedgeMesh mesh;
  PantsDecomposition decomposition;
  DiscreteMetric metric;
};

Converged converge(HalfedgeMesh mesh, const std::vector<CutCurve>* prescribed = nullptr) {
  Converged c;
  c.decomposition = prescribed ? decomposeAlong(mesh, *prescribed) : pantsDecompose(mesh);
  c.metric = flowToHyperbolic(mesh, initMetric(mesh)).metric;
  c.mesh = std::move(mesh);
  return c;
}

const Converged& oneHoledTorus() {
  static const Converged c = converge(exciseLandmarks(HalfedgeMesh::build(fx::torus({})), {{0}}));
  return c;
}

// Link of an interior vertex, counterclockwise so that its star is on the left.
CutCurve linkLoop(const HalfedgeMesh& mesh, int v) {
  CutCurve c;
  c.vertices = mesh.neighbors(v);
  std::reverse(c.vertices.begin(), c.vertices.end());
  return c;
}

double distanceUpToSign(const hyp::HolonomyTransform& a, const hyp::HolonomyTransform& b) {
  return std::min((a.matrix() - b.matrix()).norm(), (a.matrix() + b.matrix()).norm());
}

CutCurve rotated(CutCurve c, int by) {
  std::rotate(c.vertices.begin(), c.vertices.begin() + by, c.vertices.end());
  return c;
}

// Mirror-symmetric genus 2 decomposed along the neck and a tube circle on
// each side, the second being the reflection of the first.
struct SymmetricGenusTwo {
  Converged c;
  int neck = -1, handleA = -1, handleB = -1;
};

const SymmetricGenusTwo& symmetricGenusTwo() {
  static const SymmetricGenusTwo s = [] {
    const fx::TorusOptions o;
    auto mesh = HalfedgeMesh::build(fx::doubleTorus(o));
    const auto torusSoup = fx::torus(o);
    CutCurve neck = fx::mirrorSeam(mesh, o), a;
    for (int j = 0; j < o.nv; ++j)
      a.vertices.push_back(fx::nearestVertex(mesh, torusSoup.positions[fx::torusVertex(o, o.nu / 2, j)]));
    const auto mirror = fx::mirrorMap(mesh, o);
    CutCurve b;
    for (int v : a.vertices) b.vertices.push_back(mirror[v]);
    // the reflection swaps the sides of a; reversing puts them back
    std::reverse(b.vertices.begin(), b.vertices.end());
    const std::vector<CutCurve> curves{neck, a, b};
    SymmetricGenusTwo out;
    out.c = converge(std::move(mesh), &curves);
    auto indexOf = [&](CutCurve curve) {
      const auto& cs = out.c.decomposition.curves;
      for (int i = 0; i < out.c.decomposition.interiorCount; ++i) {
        const auto& vs = cs[i].vertices;
        if (std::is_permutation(vs.begin(), vs.end(), curve.vertices.begin(), curve.vertices.end())) return i;
      }
      return -1;
    };
    out.neck = indexOf(neck);
    out.handleA = indexOf(a);
    out.handleB = indexOf(b);
    return out;
  }();
  return s;
}

} // namespace

TEST_SUITE_BEGIN("fn-coords");

TEST_CASE("null-homotopic loop: holonomy is the rotation by the angle sum") {
  const auto mesh = exciseLandmarks(HalfedgeMesh::build(fx::torus({})), {{0}});
  const auto metric = initMetric(mesh);
  const auto state = curvature(mesh, metric);
  for (int v : {20, 33, 47}) {
    REQUIRE_FALSE(mesh.isBoundaryVertex(v));
    const auto strip = layoutStrip(mesh, metric, linkLoop(mesh, v));
    CHECK(std::abs(strip.holonomy.trace()) == doctest::Approx(2 * std::abs(std::cos(state.K[v] / 2))).epsilon(1e-10));
  }
  // flat angle sums close up
  const auto& c = oneHoledTorus();
  for (int v : {20, 33, 47}) {
    const auto strip = layoutStrip(c.mesh, c.metric, linkLoop(c.mesh, v));
    CHECK(distanceUpToSign(strip.holonomy, hyp::HolonomyTransform()) < 1e-7);
  }
}

TEST_CASE("doubled loop has the squared holonomy") {
  const auto& c = oneHoledTorus();
  for (int i = 0; i < c.decomposition.interiorCount; ++i) {
    const auto& loop = c.decomposition.curves[i];
    CutCurve twice = loop;
    twice.vertices.insert(twice.vertices.end(), loop.vertices.begin(), loop.vertices.end());
    const auto single = layoutStrip(c.mesh, c.metric, loop).holonomy;
    const auto doubled = layoutStrip(c.mesh, c.metric, twice).holonomy;
    CHECK(distanceUpToSign(doubled, single * single) < 1e-9 * single.matrix().squaredNorm());
  }
}

TEST_CASE("strip invariants and holonomy certificate") {
  const auto& c = oneHoledTorus();
  REQUIRE(c.decomposition.interiorCount == 1);
  const auto& loop = c.decomposition.curves[0];
  const auto strip = layoutStrip(c.mesh, c.metric, loop);
  CHECK(strip.maxMismatch < 1e-9);
  CHECK_FALSE(strip.extendedPrecision);
  CHECK(std::abs(strip.holonomy.trace()) > 2);
  CHECK(strip.triangles.size() >= loop.vertices.size());
  const double l = geodesicLength(strip);
  CHECK(l > 0);
  CHECK(l <= combinatorialLength(c.mesh, c.metric, loop));
}

TEST_CASE("geodesic length ignores basepoint and direction") {
  const auto& c = oneHoledTorus();
  for (const auto& loop : c.decomposition.curves) {
    const double l = geodesicLength(layoutStrip(c.mesh, c.metric, loop));
    for (int k = 1; k < loop.edgeCount(); ++k)
      CHECK(geodesicLength(layoutStrip(c.mesh, c.metric, rotated(loop, k))) == doctest::Approx(l).epsilon(1e-10));
    if (loop.kind == CurveKind::Interior)
      CHECK(geodesicLength(layoutStrip(c.mesh, c.metric, loop.reversed())) == doctest::Approx(l).epsilon(1e-10));
  }
}

TEST_CASE("geodesic boundary is as long as the boundary loop") {
  const auto& c = oneHoledTorus();
  for (int i = c.decomposition.interiorCount; i < static_cast<int>(c.decomposition.curves.size()); ++i) {
    const auto& loop = c.decomposition.curves[i];
    CHECK(geodesicLength(layoutStrip(c.mesh, c.metric, loop)) ==
          doctest::Approx(combinatorialLength(c.mesh, c.metric, loop)).epsilon(1e-7));
  }
}

TEST_CASE("errors") {
  const auto& c = oneHoledTorus();
  CHECK_THROWS_WITH_AS(layoutStrip(c.mesh, c.metric, CutCurve{{0, 40}}), doctest::Contains("not joined"), Error);
  // boundary loop walked backwards has the outside on its left
  const auto backwards = c.decomposition.curves.back().reversed();
  CHECK_THROWS_AS(layoutStrip(c.mesh, c.metric, backwards), Error);
  CHECK_THROWS_AS(geodesicLength(layoutStrip(c.mesh, c.metric, linkLoop(c.mesh, 20))), Error);
  CHECK_THROWS_AS(cuffTwist(c.mesh, c.metric, c.decomposition, 1), Error);
}

TEST_CASE("hexagon closure") {
  const auto check = [](const Converged& c) {
    std::vector<double> lengths;
    for (const auto& loop : c.decomposition.curves) lengths.push_back(geodesicLength(layoutStrip(c.mesh, c.metric, loop)));
    const auto seams = checkSeams(c.mesh, c.metric, c.decomposition, lengths);
    CHECK(seams.size() == 3 * c.decomposition.pants.size());
    for (const auto& s : seams) CHECK(std::abs(s.measured - s.predicted) < 1e-6);
  };
  SUBCASE("one-holed torus") { check(oneHoledTorus()); }
  SUBCASE("four-holed sphere") {
    auto mesh = HalfedgeMesh::build(fx::icosphere(2));
    check(converge(exciseLandmarks(mesh, {{0, 1, 2, 3}})));
  }
  SUBCASE("genus two") { check(symmetricGenusTwo().c); }
}

TEST_CASE("mirror-symmetric genus two") {
  const auto& s = symmetricGenusTwo();
  REQUIRE(s.neck >= 0);
  REQUIRE(s.handleA >= 0);
  REQUIRE(s.handleB >= 0);
  const auto& c = s.c;
  const double la = geodesicLength(layoutStrip(c.mesh, c.metric, c.decomposition.curves[s.handleA]));
  const double lb = geodesicLength(layoutStrip(c.mesh, c.metric, c.decomposition.curves[s.handleB]));
  CHECK(la == doctest::Approx(lb).epsilon(1e-6));
  const auto twist = cuffTwist(c.mesh, c.metric, c.decomposition, s.neck);
  CHECK(std::abs(twist.angle) < 1e-6);
  CHECK(twist.length == doctest::Approx(geodesicLength(layoutStrip(c.mesh, c.metric, c.decomposition.curves[s.neck]))));
}

TEST_CASE("twist does not depend on the curve's orientation") {
  for (const Converged* c : {&oneHoledTorus(), &symmetricGenusTwo().c})
    for (int i = 0; i < c->decomposition.interiorCount; ++i) {
      const auto a = cuffTwist(c->mesh, c->metric, c->decomposition, i);
      const auto b = cuffTwist(c->mesh, c->metric, c->decomposition, i, true);
      CHECK(a.angle == doctest::Approx(b.angle).epsilon(1e-9));
      CHECK(a.angle == doctest::Approx(2 * kPi * a.offset / a.length));
      CHECK(a.offset > -a.length / 2);
      CHECK(a.offset <= a.length / 2);
    }
}

TEST_CASE("regluing with a shift moves the twist monotonically") {
  std::vector<double> angles;
  for (int shear = -2; shear <= 2; ++shear) {
    fx::TorusOptions o;
    o.nv = 8;
    o.shear = shear;
    std::vector<int> origin;
    auto mesh = exciseLandmarks(HalfedgeMesh::build(fx::torus(o)), {{fx::torusVertex(o, o.nu / 2, 0)}}, &origin);
    std::vector<int> id(o.nu * o.nv, -1);
    for (size_t v = 0; v < origin.size(); ++v) id[origin[v]] = static_cast<int>(v);
    CutCurve ring;
    for (int j = 0; j < o.nv; ++j) ring.vertices.push_back(id[fx::torusVertex(o, 0, j)]);
    const std::vector<CutCurve> curves{ring};
    const auto c = converge(std::move(mesh), &curves);
    angles.push_back(cuffTwist(c.mesh, c.metric, c.decomposition, 0).angle);
  }
  CAPTURE(angles);
  const bool increasing = std::is_sorted(angles.begin(), angles.end());
  const bool decreasing = std::is_sorted(angles.rbegin(), angles.rend());
  CHECK((increasing || decreasing));
  for (size_t k = 1; k < angles.size(); ++k) CHECK(std::abs(angles[k] - angles[k - 1]) > 0.5);
  // the unsheared torus is symmetric under u -> -u, which also negates the shear
  CHECK(std::abs(angles[2]) < 1e-9);
  CHECK(angles[0] == doctest::Approx(-angles[4]).epsilon(1e-9));
  CHECK(angles[1] == doctest::Approx(-angles[3]).epsilon(1e-9));
}

TEST_CASE("assemble") {
  PantsDecomposition d;
  SUBCASE("thrice-punctured sphere") {
    d.curves.resize(3, CutCurve{{}, CurveKind::Boundary});
    const auto fn = assemble(d, {1.0, 2.0, 3.0}, {}, {0, 3});
    CHECK(fn.pairs.empty());
    CHECK(fn.boundaryLengths == std::vector<double>{0, 0, 0});
    CHECK(fn.dimension() == 0);
  }
  SUBCASE("one-holed torus") {
    d.curves = {CutCurve{}, CutCurve{{}, CurveKind::Boundary}};
    d.interiorCount = 1;
    const auto fn = assemble(d, {1.5, 0.7}, {0.25}, {1, 1});
    REQUIRE(fn.pairs.size() == 1);
    CHECK(fn.pairs[0] == FNPair{1.5, 0.25});
    CHECK(fn.boundaryLengths == std::vector<double>{0});
    CHECK_THROWS_AS(assemble(d, {1.5, 0.7}, {}, {1, 1}), Error);
    CHECK_THROWS_AS(assemble(d, {1.5, 0.7}, {0.25}, {2, 0}), Error);
    CHECK_THROWS_AS(assemble(d, {0.0, 0.7}, {0.25}, {1, 1}), Error);
  }
  SUBCASE("closed genus two") {
    d.curves.resize(3);
    d.interiorCount = 3;
    const auto fn = assemble(d, {1, 2, 3}, {0, 0, 0}, {2, 0});
    CHECK(fn.pairs.size() == 3);
    CHECK(fn.boundaryLengths.empty());
    CHECK(fn.dimension() == 6);
  }
  SUBCASE("count mismatch is reported as such") {
    d.curves.resize(2);
    d.interiorCount = 2;
    try {
      assemble(d, {1, 2}, {0, 0}, {1, 1});
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CountMismatch);
    }
  }
}

TEST_SUITE_END();
