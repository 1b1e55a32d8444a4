#pragma once

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fnshape/errors.hpp"

// Hyperbolic trigonometry and PSL(2,R) isometries of the upper half-plane.
namespace fnshape::hyp {

// Cosine/cosh arguments within this distance of their valid range are
// clamped; beyond it the input is reported as degenerate.
inline constexpr double kClampTolerance = 1e-12;
// |trace| must exceed 2 by this margin for a transform to count as hyperbolic.
inline constexpr double kHyperbolicTraceMargin = 1e-10;

// Angle opposite `opposite` in the hyperbolic triangle with the given sides.
double angle(double opposite, double adjacent1, double adjacent2);

struct HyperbolicTriangle {
  std::array<double, 3> lengths{};

  // angles()[k] is the angle opposite lengths[k].
  std::array<double, 3> angles() const;
  double area() const;
};

inline double triangleArea(const HyperbolicTriangle& t) { return t.area(); }

// Seam length between cuffs i and j of the pair of pants with cuff lengths
// (li, lj, lk): the side of the right-angled hexagon opposite lk/2.
double pantsSeam(double li, double lj, double lk);

enum class IsometryKind { Elliptic, Parabolic, Hyperbolic };

// Orientation-preserving isometry z -> (az+b)/(cz+d) with ad - bc = 1.
template <typename Real>
class BasicHolonomy {
public:
  using Matrix = Eigen::Matrix<Real, 2, 2>;
  using Complex = std::complex<Real>;

  BasicHolonomy() : m_(Matrix::Identity()) {}
  // Rescales to unit determinant; the determinant must be positive.
  explicit BasicHolonomy(const Matrix& m) : m_(m) { renormalize(); }

  static BasicHolonomy identity() { return BasicHolonomy(); }

  const Matrix& matrix() const { return m_; }
  Real trace() const { return m_(0, 0) + m_(1, 1); }
  Real determinant() const { return m_.determinant(); }

  IsometryKind kind(Real tolerance = Real(kHyperbolicTraceMargin)) const {
    const Real t = std::abs(trace());
    if (t > 2 + tolerance) return IsometryKind::Hyperbolic;
    if (t < 2 - tolerance) return IsometryKind::Elliptic;
    return IsometryKind::Parabolic;
  }

  BasicHolonomy inverse() const {
    Matrix inv;
    inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return BasicHolonomy(inv, NoNormalize{});
  }

  Complex apply(const Complex& z) const { return (m_(0, 0) * z + m_(0, 1)) / (m_(1, 0) * z + m_(1, 1)); }

  BasicHolonomy operator*(const BasicHolonomy& other) const { return BasicHolonomy(Matrix(m_ * other.m_)); }

  template <typename Other>
  BasicHolonomy<Other> cast() const {
    return BasicHolonomy<Other>(m_.template cast<Other>());
  }

private:
  struct NoNormalize {};
  BasicHolonomy(const Matrix& m, NoNormalize) : m_(m) {}

  void renormalize() {
    const Real det = m_.determinant();
    if (!(det > 0)) fail(ErrorCode::GeometryError, "isometry matrix has non-positive determinant");
    m_ /= std::sqrt(det);
  }

  Matrix m_;
};

using HolonomyTransform = BasicHolonomy<double>;

template <typename Real>
BasicHolonomy<Real> compose(const BasicHolonomy<Real>& a, const BasicHolonomy<Real>& b) {
  return a * b;
}

// Length of the closed geodesic whose holonomy is m: 2 acosh(|tr|/2).
template <typename Real>
Real translationLength(const BasicHolonomy<Real>& m) {
  const Real t = std::abs(m.trace());
  if (!(t > 2 + Real(kHyperbolicTraceMargin)))
    fail(ErrorCode::NotHyperbolic, "transform with |trace| = " + std::to_string(static_cast<double>(t)) +
                                       " is not hyperbolic");
  return 2 * std::acosh(t / 2);
}

// --- upper half-plane geometry ---

template <typename Real>
Real distance(const std::complex<Real>& z, const std::complex<Real>& w) {
  const Real num = std::norm(z - w);
  return std::acosh(1 + num / (2 * z.imag() * w.imag()));
}

// Point at hyperbolic distance d from i, in the direction obtained by turning
// the upward direction counterclockwise by phi.
template <typename Real>
std::complex<Real> pointAt(Real d, Real phi) {
  using C = std::complex<Real>;
  const C zeta = std::polar(std::tanh(d / 2), phi);
  return C(0, 1) * (C(1) + zeta) / (C(1) - zeta);
}

// Rotation about i by phi (counterclockwise).
template <typename Real>
BasicHolonomy<Real> rotationAboutI(Real phi) {
  typename BasicHolonomy<Real>::Matrix m;
  const Real c = std::cos(phi / 2), s = std::sin(phi / 2);
  m << c, s, -s, c;
  return BasicHolonomy<Real>(m);
}

// Translation by `length` along the imaginary axis (upward).
template <typename Real>
BasicHolonomy<Real> translationAlongAxis(Real length) {
  typename BasicHolonomy<Real>::Matrix m;
  m << std::exp(length / 2), 0, 0, std::exp(-length / 2);
  return BasicHolonomy<Real>(m);
}

// Half-turn about the midpoint of the segment [i, i e^length]; swaps the ends.
template <typename Real>
BasicHolonomy<Real> halfTurn(Real length) {
  typename BasicHolonomy<Real>::Matrix m;
  m << 0, -std::exp(length / 2), std::exp(-length / 2), 0;
  return BasicHolonomy<Real>(m);
}

// Isometry sending i to p and i e^{d(p,q)} to q.
template <typename Real>
BasicHolonomy<Real> frameIsometry(const std::complex<Real>& p, const std::complex<Real>& q) {
  using C = std::complex<Real>;
  const Real x = p.real(), y = p.imag();
  const Real sy = std::sqrt(y);
  typename BasicHolonomy<Real>::Matrix a;
  a << sy, x / sy, 0, 1 / sy;
  const BasicHolonomy<Real> toP(a);
  const C w = toP.inverse().apply(q);
  const Real phi = std::arg((w - C(0, 1)) / (w + C(0, 1)));
  return toP * rotationAboutI<Real>(phi);
}

// Hyperbolic transform written as P diag(lambda, 1/lambda) P^{-1} with
// |lambda| > 1 and det P = 1. P^{-1} carries the axis to the imaginary axis
// with the attracting fixed point at infinity.
template <typename Real>
struct AxisFrame {
  BasicHolonomy<Real> toStandard; // P^{-1}
  Real translation;               // 2 log|lambda|
};

template <typename Real>
AxisFrame<Real> axisFrame(const BasicHolonomy<Real>& h) {
  using Matrix = typename BasicHolonomy<Real>::Matrix;
  const Matrix& m = h.matrix();
  const Real tr = h.trace();
  if (!(std::abs(tr) > 2 + Real(kHyperbolicTraceMargin)))
    fail(ErrorCode::NotHyperbolic, "axis requested for a non-hyperbolic transform");
  const Real disc = std::sqrt(tr * tr - 4);
  const Real big = tr > 0 ? (tr + disc) / 2 : (tr - disc) / 2;
  const Real small = 1 / big;
  auto eigenvector = [&](Real lambda) {
    Eigen::Matrix<Real, 2, 1> u(m(0, 1), lambda - m(0, 0));
    Eigen::Matrix<Real, 2, 1> v(lambda - m(1, 1), m(1, 0));
    return u.squaredNorm() >= v.squaredNorm() ? u : v;
  };
  Matrix p;
  p.col(0) = eigenvector(big);
  p.col(1) = eigenvector(small);
  if (p.determinant() < 0) p.col(1) = -p.col(1);
  const BasicHolonomy<Real> conj(p);
  return {conj.inverse(), 2 * std::log(std::abs(big))};
}

// Common perpendicular between the axis of `reference` (standardized by
// `frame`) and the axis of `other`.
template <typename Real>
struct Perpendicular {
  Real distance;     // length of the common perpendicular
  Real footPosition; // signed arc length of the foot along the reference axis
};

template <typename Real>
Perpendicular<Real> commonPerpendicular(const AxisFrame<Real>& frame, const BasicHolonomy<Real>& other) {
  const BasicHolonomy<Real> n = frame.toStandard * other * frame.toStandard.inverse();
  const auto& m = n.matrix();
  // fixed points solve c z^2 + (d - a) z - b = 0
  const Real a = m(1, 0), b = m(1, 1) - m(0, 0), c = -m(0, 1);
  const Real scale = std::abs(a) + std::abs(b) + std::abs(c);
  if (std::abs(a) <= Real(1e-14) * scale)
    fail(ErrorCode::GeometryError, "geodesics share an endpoint at infinity");
  const Real disc = b * b - 4 * a * c;
  if (!(disc > 0)) fail(ErrorCode::NotHyperbolic, "second transform is not hyperbolic");
  const Real sq = std::sqrt(disc);
  // numerically stable roots
  const Real qroot = -(b + (b >= 0 ? sq : -sq)) / 2;
  const Real r1 = qroot / a, r2 = c / qroot;
  const Real prod = r1 * r2;
  if (!(prod > 0)) fail(ErrorCode::GeometryError, "geodesics intersect or share an endpoint");
  const Real ratio = std::abs(r1 + r2) / std::abs(r1 - r2);
  return {std::acosh(ratio), std::log(prod) / 2};
}

} // namespace fnshape::hyp
