#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fnshape/hyperbolic.hpp"

using namespace fnshape;
using namespace fnshape::hyp;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode codeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

HolonomyTransform randomIsometry(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  HolonomyTransform::Matrix m;
  do {
    m << u(rng), u(rng), u(rng), u(rng);
  } while (m.determinant() < 0.1);
  return HolonomyTransform(m);
}

HolonomyTransform withFixedPoints(double a, double b, double lambda) {
  HolonomyTransform::Matrix p, d;
  p << a, b, 1, 1;
  d << lambda, 0, 0, 1 / lambda;
  if (p.determinant() < 0) p.col(1) = -p.col(1);
  return HolonomyTransform(HolonomyTransform::Matrix(p * d * p.inverse()));
}

double euclideanAngle(double c, double a, double b) { return std::acos((a * a + b * b - c * c) / (2 * a * b)); }

// point at arc length t from p towards q
C along(C p, C q, double t) { return frameIsometry(p, q).apply(C(0, std::exp(t))); }

} // namespace

TEST_SUITE("hyp-kernel") {

TEST_CASE("equilateral angle against extended precision") {
  const long double c = std::cosh(1.0L), s = std::sinh(1.0L);
  const long double oracle = std::acos(c * (c - 1) / (s * s));
  CHECK(std::abs(angle(1, 1, 1) - static_cast<double>(oracle)) < 1e-15);
  CHECK(std::abs(angle(1, 1, 1) - 0.918797872178027369) < 1e-15);
  const auto a = HyperbolicTriangle{{1, 1, 1}}.angles();
  CHECK(a[0] == a[1]);
  CHECK(a[1] == a[2]);
}

TEST_CASE("small equilateral approaches pi/3 from below") {
  double previous = 0;
  for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double t = angle(e, e, e);
    CHECK(t < kPi / 3);
    CHECK(t > previous);
    CHECK(kPi / 3 - t < e * e);
    previous = t;
  }
}

TEST_CASE("degenerate triangles") {
  CHECK(codeOf([] { angle(10, 1, 1); }) == ErrorCode::DegenerateTriangle);
  CHECK(codeOf([] { angle(1, 0, 1); }) == ErrorCode::DegenerateTriangle);
  CHECK(codeOf([] { HyperbolicTriangle{{1, 1, 10}}.area(); }) == ErrorCode::DegenerateTriangle);
  // flat within roundoff is accepted
  CHECK(angle(2, 1, 1) == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("Euclidean limit is second order") {
  const double a = 0.7, b = 1.1, c = 1.3;
  double prevErr = 0;
  for (double eps : {1e-1, 5e-2, 2.5e-2}) {
    const double err = std::abs(angle(eps * c, eps * a, eps * b) - euclideanAngle(c, a, b));
    CHECK(err < eps * eps);
    if (prevErr > 0) CHECK(err / prevErr == doctest::Approx(0.25).epsilon(0.05));
    prevErr = err;
  }
}

TEST_CASE("area") {
  CHECK(HyperbolicTriangle{{1, 1, 1}}.area() == doctest::Approx(kPi - 3 * 0.918797872178027369).epsilon(1e-14));
  CHECK(std::abs(HyperbolicTriangle{{1, 1, 1}}.area() - 0.385199037055711131) < 1e-14);
  CHECK(triangleArea({{1e-4, 1e-4, 1e-4}}) < 1e-8);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.05, 8);
  for (int k = 0; k < 200; ++k) {
    const double a = u(rng), b = u(rng);
    const double c = std::abs(a - b) + (a + b - std::abs(a - b)) * std::uniform_real_distribution<double>(0.01, 0.99)(rng);
    const double area = HyperbolicTriangle{{a, b, c}}.area();
    CHECK(area > 0);
    CHECK(area < kPi);
  }
}

TEST_CASE("area is additive under a cevian") {
  const C p(0, 1), q = pointAt(1.3, 0.4), r = pointAt(0.9, 2.1);
  const C m = along(q, r, 0.37 * distance(q, r));
  const double whole = HyperbolicTriangle{{distance(q, r), distance(r, p), distance(p, q)}}.area();
  const double left = HyperbolicTriangle{{distance(q, m), distance(m, p), distance(p, q)}}.area();
  const double right = HyperbolicTriangle{{distance(m, r), distance(r, p), distance(p, m)}}.area();
  CHECK(left + right == doctest::Approx(whole).epsilon(1e-12));
}

TEST_CASE("pants seam") {
  const double c = std::cosh(1.0);
  CHECK(pantsSeam(2, 2, 2) == doctest::Approx(std::acosh((c + c * c) / (std::sinh(1.0) * std::sinh(1.0)))).epsilon(1e-15));
  CHECK(std::abs(pantsSeam(2, 2, 2) - 1.70491283235801369) < 1e-14);
  CHECK(pantsSeam(1.5, 1.5, 1.5) == pantsSeam(1.5, 1.5, 1.5));
  CHECK(pantsSeam(1.2, 3.4, 0.7) == doctest::Approx(pantsSeam(3.4, 1.2, 0.7)).epsilon(1e-15));
  const double li = 1.7, ch = std::cosh(li / 2), sh = std::sinh(li / 2);
  CHECK(pantsSeam(li, li, 1e-7) == doctest::Approx(std::acosh((1 + ch * ch) / (sh * sh))).epsilon(1e-10));
  CHECK(codeOf([] { pantsSeam(1, 0, 1); }) == ErrorCode::InvalidCuff);
  CHECK(codeOf([] { pantsSeam(-1, 1, 1); }) == ErrorCode::InvalidCuff);
}

TEST_CASE("translation length") {
  CHECK(translationLength(translationAlongAxis(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  HolonomyTransform::Matrix d;
  d << std::exp(0.5), 0, 0, std::exp(-0.5);
  CHECK(translationLength(HolonomyTransform(d)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(codeOf([] { translationLength(HolonomyTransform::identity()); }) == ErrorCode::NotHyperbolic);
  CHECK(codeOf([] { translationLength(rotationAboutI(0.3)); }) == ErrorCode::NotHyperbolic);

  std::mt19937 rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto m = translationAlongAxis(0.1 + 0.1 * k) * randomIsometry(rng);
    if (m.kind() != IsometryKind::Hyperbolic) continue;
    const auto g = randomIsometry(rng);
    const double l = translationLength(m);
    CHECK(translationLength(g * m * g.inverse()) == doctest::Approx(l).epsilon(1e-10));
    CHECK(translationLength(m.inverse()) == doctest::Approx(l).epsilon(1e-12));
  }
}

TEST_CASE("classification") {
  CHECK(rotationAboutI(1.0).kind() == IsometryKind::Elliptic);
  HolonomyTransform::Matrix p;
  p << 1, 1, 0, 1;
  CHECK(HolonomyTransform(p).kind() == IsometryKind::Parabolic);
  CHECK(translationAlongAxis(0.5).kind() == IsometryKind::Hyperbolic);
}

TEST_CASE("composition") {
  std::mt19937 rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto a = randomIsometry(rng), b = randomIsometry(rng), c = randomIsometry(rng);
    CHECK(std::abs(a.determinant() - 1) < 1e-12);
    CHECK((compose(a, HolonomyTransform::identity()).matrix() - a.matrix()).norm() < 1e-14);
    const auto id = compose(a, a.inverse()).matrix();
    CHECK((id - HolonomyTransform::Matrix::Identity()).norm() < 1e-12);
    const auto left = compose(compose(a, b), c), right = compose(a, compose(b, c));
    CHECK((left.matrix() - right.matrix()).norm() < 1e-12);
    CHECK(std::abs(left.determinant() - 1) < 1e-12);
  }
  CHECK_THROWS_AS(HolonomyTransform(HolonomyTransform::Matrix(HolonomyTransform::Matrix::Zero())), Error);
}

TEST_CASE("half-plane frames") {
  const C i(0, 1);
  CHECK(distance(i, pointAt(1.25, 0.8)) == doctest::Approx(1.25).epsilon(1e-13));
  CHECK(std::abs(pointAt(0.7, 0.0) - i * std::exp(0.7)) < 1e-14);
  // counterclockwise turn moves the upward direction towards negative x
  CHECK(pointAt(0.7, 0.5).real() < 0);
  CHECK(std::abs(rotationAboutI(0.9).apply(pointAt(0.7, 0.3)) - pointAt(0.7, 1.2)) < 1e-13);
  CHECK(std::abs(halfTurn(0.8).apply(i) - i * std::exp(0.8)) < 1e-14);
  CHECK(std::abs(halfTurn(0.8).apply(i * std::exp(0.8)) - i) < 1e-14);

  const C p = pointAt(0.6, 2.0), q = pointAt(1.4, -0.7);
  const auto f = frameIsometry(p, q);
  CHECK(std::abs(f.apply(i) - p) < 1e-13);
  CHECK(std::abs(f.apply(i * std::exp(distance(p, q))) - q) < 1e-12);
}

TEST_CASE("axis frame and common perpendicular") {
  const auto m = withFixedPoints(-0.4, 2.5, 1.8);
  const auto frame = axisFrame(m);
  CHECK(frame.translation == doctest::Approx(translationLength(m)).epsilon(1e-12));
  const auto standard = frame.toStandard * m * frame.toStandard.inverse();
  CHECK(std::abs(standard.matrix()(0, 1)) < 1e-12);
  CHECK(std::abs(standard.matrix()(1, 0)) < 1e-12);
  CHECK(std::abs(standard.matrix()(0, 0)) > 1);

  // geodesic with real endpoints a, b > 0 against the imaginary axis
  const auto axis = translationAlongAxis(0.9);
  const auto f0 = axisFrame(axis);
  const double a = 1.5, b = 6.0;
  const auto per = commonPerpendicular(f0, withFixedPoints(a, b, 2.0));
  CHECK(per.distance == doctest::Approx(std::acosh((a + b) / (b - a))).epsilon(1e-12));
  CHECK(per.footPosition == doctest::Approx(0.5 * std::log(a * b)).epsilon(1e-12));
  // endpoints on either side of the axis: the geodesics cross
  CHECK(codeOf([&] { commonPerpendicular(f0, withFixedPoints(-1.0, 2.0, 2.0)); }) == ErrorCode::GeometryError);
}

}
