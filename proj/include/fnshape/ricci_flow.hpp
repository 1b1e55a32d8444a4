#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fnshape/mesh.hpp"

namespace fnshape {

// Circle-pattern metric: each vertex carries a circle of hyperbolic radius r,
// each edge an intersection weight w in [0,1], and
//   cosh l_ij = cosh r_i cosh r_j + w_ij sinh r_i sinh r_j.
// The flow variable is u = log tanh(r/2) < 0.
struct DiscreteMetric {
  Eigen::VectorXd u;
  std::vector<double> weights; // per edge
  std::vector<double> lengths; // per edge, derived from u and weights

  static DiscreteMetric fromConformalFactors(const HalfedgeMesh& mesh, Eigen::VectorXd u, std::vector<double> weights);

  double radius(int v) const;
  // Side lengths of face f, lengths[k] opposite corner k.
  std::array<double, 3> faceLengths(const HalfedgeMesh& mesh, int f) const;
};

double radiusFromFactor(double u);
double factorFromRadius(double r);
double circlePatternLength(double ri, double rj, double weight);

// True if every factor is finite and negative and every face is a
// non-degenerate hyperbolic triangle.
bool isValidMetric(const HalfedgeMesh& mesh, const DiscreteMetric& metric);

struct CurvatureState {
  // 2pi - angle sum at interior vertices, pi - angle sum on the boundary
  Eigen::VectorXd K;
  double residual = 0.0;          // max |K - target| (target 0)
  double totalArea = 0.0;         // sum of face areas
  double gaussBonnetError = 0.0;  // |sum K - sum area - 2 pi chi|
  double minAngle = 0.0;
};

CurvatureState curvature(const HalfedgeMesh& mesh, const DiscreteMetric& metric);

// Radii from 2^(-3/4) of the mean incident edge length after a global
// normalization, weights fit to the normalized edge lengths and clamped.
DiscreteMetric initMetric(const HalfedgeMesh& mesh);

// dK/du, closed form.
Eigen::SparseMatrix<double> curvatureJacobian(const HalfedgeMesh& mesh, const DiscreteMetric& metric);
// dK/du by central differences of the per-face angles.
Eigen::SparseMatrix<double> curvatureJacobianFiniteDifference(const HalfedgeMesh& mesh, const DiscreteMetric& metric,
                                                              double step = 1e-6);

enum class HessianMode { Analytic, FiniteDifference };

struct FlowIterate {
  int iteration = 0;
  double residual = 0.0;
  double minRadius = 0.0;
  double stepScale = 0.0;
  double totalArea = 0.0;
  double gaussBonnetError = 0.0;
};

struct FlowOptions {
  double tolerance = 1e-8;
  int maxIterations = 100;
  HessianMode hessian = HessianMode::Analytic;
  std::function<void(const FlowIterate&)> observer;
};

struct NewtonStepResult {
  DiscreteMetric metric;
  double residual = 0.0;  // max-norm after the step
  double stepScale = 0.0; // accepted line-search fraction
};

// One damped Newton step on K(u) = target. The step is halved until all
// faces stay valid and the Euclidean norm of K - target does not increase.
NewtonStepResult newtonStep(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const Eigen::VectorXd& target,
                            HessianMode hessian = HessianMode::Analytic);

struct FlowResult {
  DiscreteMetric metric;
  int iterations = 0;
  double residual = 0.0;
  double totalArea = 0.0;
  std::vector<FlowIterate> history; // entry 0 is the starting metric
};

// Drives every vertex curvature to zero, which makes the metric hyperbolic
// with geodesic boundary. Stops once both the max residual and the total
// defect |sum K| are within tolerance.
FlowResult flowToHyperbolic(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const FlowOptions& options = {});

} // namespace fnshape
