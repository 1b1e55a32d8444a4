#include "fnshape/hyperbolic.hpp"

#include <numbers>
#include <string>

namespace fnshape::hyp {

double angle(double opposite, double adjacent1, double adjacent2) {
  const double c = opposite, a = adjacent1, b = adjacent2;
  if (!(a > 0 && b > 0 && c > 0))
    fail(ErrorCode::DegenerateTriangle, "non-positive side length");
  const double cosine = (std::cosh(a) * std::cosh(b) - std::cosh(c)) / (std::sinh(a) * std::sinh(b));
  if (!(cosine <= 1 + kClampTolerance && cosine >= -1 - kClampTolerance))
    fail(ErrorCode::DegenerateTriangle, "cosine-law argument " + std::to_string(cosine) + " for sides (" +
                                            std::to_string(c) + ", " + std::to_string(a) + ", " +
                                            std::to_string(b) + ")");
  // half-angle form stays accurate for small and nearly flat triangles
  const double s = (a + b + c) / 2;
  const double sa = std::max(s - a, 0.0), sb = std::max(s - b, 0.0), sc = std::max(s - c, 0.0);
  const double sinHalf = std::sqrt(std::sinh(sa) * std::sinh(sb));
  const double cosHalf = std::sqrt(std::sinh(s) * std::sinh(sc));
  return 2 * std::atan2(sinHalf, cosHalf);
}

std::array<double, 3> HyperbolicTriangle::angles() const {
  const auto& l = lengths;
  return {angle(l[0], l[1], l[2]), angle(l[1], l[2], l[0]), angle(l[2], l[0], l[1])};
}

double HyperbolicTriangle::area() const {
  const auto a = angles();
  return std::numbers::pi - (a[0] + a[1] + a[2]);
}

double pantsSeam(double li, double lj, double lk) {
  if (!(li > 0 && lj > 0 && lk > 0))
    fail(ErrorCode::InvalidCuff, "cuff lengths must be positive (" + std::to_string(li) + ", " +
                                     std::to_string(lj) + ", " + std::to_string(lk) + ")");
  const double ci = std::cosh(li / 2), cj = std::cosh(lj / 2), ck = std::cosh(lk / 2);
  return std::acosh((ck + ci * cj) / (std::sinh(li / 2) * std::sinh(lj / 2)));
}

} // namespace fnshape::hyp
