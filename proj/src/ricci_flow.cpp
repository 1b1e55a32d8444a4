#include "fnshape/ricci_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "fnshape/hyperbolic.hpp"

namespace fnshape {

namespace {

constexpr double kPi = std::numbers::pi;
// Radius as a fraction of the mean incident edge length. An edge of length l
// between circles of radius r can be fit with w in [0,1] when l lies between
// about sqrt(2) r and 2 r; this fraction centres that window (in log scale)
// on the mean length.
const double kRadiusFraction = std::pow(2.0, -0.75);

struct FaceGeometry {
  std::array<int, 3> vertices;
  std::array<int, 3> edges; // edges[k] opposite corner k
  std::array<double, 3> lengths;
  std::array<double, 3> angles;
};

FaceGeometry faceGeometry(const HalfedgeMesh& mesh, const DiscreteMetric& metric, int f) {
  FaceGeometry g;
  g.vertices = mesh.triangle(f);
  for (int k = 0; k < 3; ++k) {
    g.edges[k] = mesh.edge(3 * f + (k + 1) % 3);
    g.lengths[k] = metric.lengths[g.edges[k]];
  }
  for (int k = 0; k < 3; ++k) g.angles[k] = hyp::angle(g.lengths[k], g.lengths[(k + 1) % 3], g.lengths[(k + 2) % 3]);
  return g;
}

// d l / d u_i for an edge of length l between circles ri (moving) and rj.
double lengthFactorDerivative(double ri, double rj, double weight, double l) {
  return std::sinh(ri) * (std::sinh(ri) * std::cosh(rj) + weight * std::cosh(ri) * std::sinh(rj)) / std::sinh(l);
}

std::string formatHistory(const std::vector<FlowIterate>& history) {
  std::ostringstream out;
  out.precision(3);
  const size_t first = history.size() > 8 ? history.size() - 8 : 0;
  for (size_t i = first; i < history.size(); ++i) out << (i == first ? "" : ", ") << history[i].residual;
  return out.str();
}

} // namespace

double radiusFromFactor(double u) { return 2.0 * std::atanh(std::exp(u)); }

double factorFromRadius(double r) { return std::log(std::tanh(r / 2.0)); }

double circlePatternLength(double ri, double rj, double weight) {
  // cosh l - 1, written to avoid cancellation for small radii
  const double sh = std::sinh((ri + rj) / 2.0);
  const double x = 2.0 * sh * sh - (1.0 - weight) * std::sinh(ri) * std::sinh(rj);
  if (!(x > 0)) return 0.0;
  return 2.0 * std::asinh(std::sqrt(x / 2.0));
}

DiscreteMetric DiscreteMetric::fromConformalFactors(const HalfedgeMesh& mesh, Eigen::VectorXd u,
                                                    std::vector<double> weights) {
  DiscreteMetric m;
  m.u = std::move(u);
  m.weights = std::move(weights);
  m.lengths.resize(mesh.nEdges());
  for (int e = 0; e < mesh.nEdges(); ++e) {
    const int h = mesh.edgeHalfedge(e);
    m.lengths[e] = circlePatternLength(radiusFromFactor(m.u[mesh.origin(h)]), radiusFromFactor(m.u[mesh.dest(h)]),
                                       m.weights[e]);
  }
  return m;
}

double DiscreteMetric::radius(int v) const { return radiusFromFactor(u[v]); }

std::array<double, 3> DiscreteMetric::faceLengths(const HalfedgeMesh& mesh, int f) const {
  return {lengths[mesh.edge(3 * f + 1)], lengths[mesh.edge(3 * f + 2)], lengths[mesh.edge(3 * f)]};
}

bool isValidMetric(const HalfedgeMesh& mesh, const DiscreteMetric& metric) {
  for (int v = 0; v < mesh.nVertices(); ++v)
    if (!std::isfinite(metric.u[v]) || !(metric.u[v] < 0)) return false;
  for (double l : metric.lengths)
    if (!std::isfinite(l) || !(l > 0)) return false;
  for (int f = 0; f < mesh.nFaces(); ++f) {
    const auto l = metric.faceLengths(mesh, f);
    if (!(l[0] < l[1] + l[2] && l[1] < l[2] + l[0] && l[2] < l[0] + l[1])) return false;
    try {
      if (!(hyp::HyperbolicTriangle{l}.area() > 0)) return false;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

CurvatureState curvature(const HalfedgeMesh& mesh, const DiscreteMetric& metric) {
  const int nv = mesh.nVertices();
  Eigen::VectorXd angleSum = Eigen::VectorXd::Zero(nv);
  CurvatureState state;
  state.minAngle = kPi;
  for (int f = 0; f < mesh.nFaces(); ++f) {
    const auto g = faceGeometry(mesh, metric, f);
    for (int k = 0; k < 3; ++k) {
      angleSum[g.vertices[k]] += g.angles[k];
      state.minAngle = std::min(state.minAngle, g.angles[k]);
    }
    state.totalArea += kPi - (g.angles[0] + g.angles[1] + g.angles[2]);
  }
  state.K.resize(nv);
  for (int v = 0; v < nv; ++v) state.K[v] = (mesh.isBoundaryVertex(v) ? kPi : 2 * kPi) - angleSum[v];
  state.residual = nv > 0 ? state.K.cwiseAbs().maxCoeff() : 0.0;
  state.gaussBonnetError = std::abs(state.K.sum() - state.totalArea - 2 * kPi * mesh.eulerCharacteristic());
  return state;
}

DiscreteMetric initMetric(const HalfedgeMesh& mesh) {
  const auto sig = signature(mesh);
  if (!sig.admissible()) fail(ErrorCode::InitError, "surface is not hyperbolic (2g-2+b <= 0)");

  double meanLength = 0.0;
  for (int e = 0; e < mesh.nEdges(); ++e) meanLength += mesh.euclideanLength(e);
  meanLength /= mesh.nEdges();
  if (!(meanLength > 0) || !std::isfinite(meanLength)) fail(ErrorCode::InitError, "mesh has zero mean edge length");

  // Side of a small equilateral triangle carrying the per-face share of the
  // hyperbolic area 2pi(2g-2+b); makes the start independent of input scale.
  const double faceArea = 2 * kPi * (-mesh.eulerCharacteristic()) / mesh.nFaces();
  const double targetLength = std::sqrt(4.0 * faceArea / std::sqrt(3.0));

  std::vector<double> incidentMean(mesh.nVertices(), 0.0);
  std::vector<int> incidentCount(mesh.nVertices(), 0);
  for (int e = 0; e < mesh.nEdges(); ++e) {
    const int h = mesh.edgeHalfedge(e);
    const double l = mesh.euclideanLength(e);
    for (int v : {mesh.origin(h), mesh.dest(h)}) {
      incidentMean[v] += l;
      ++incidentCount[v];
    }
  }
  for (int v = 0; v < mesh.nVertices(); ++v) incidentMean[v] /= incidentCount[v];

  auto attempt = [&](double scale) {
    Eigen::VectorXd u(mesh.nVertices());
    std::vector<double> radii(mesh.nVertices());
    for (int v = 0; v < mesh.nVertices(); ++v) {
      radii[v] = scale * kRadiusFraction * incidentMean[v];
      u[v] = factorFromRadius(radii[v]);
    }
    std::vector<double> weights(mesh.nEdges());
    for (int e = 0; e < mesh.nEdges(); ++e) {
      const int h = mesh.edgeHalfedge(e);
      const double ri = radii[mesh.origin(h)], rj = radii[mesh.dest(h)];
      const double l = scale * mesh.euclideanLength(e);
      const double w = (std::cosh(l) - std::cosh(ri) * std::cosh(rj)) / (std::sinh(ri) * std::sinh(rj));
      weights[e] = std::isfinite(w) ? std::clamp(w, 0.0, 1.0) : 1.0;
    }
    return DiscreteMetric::fromConformalFactors(mesh, std::move(u), std::move(weights));
  };

  const double base = targetLength / meanLength;
  // try the natural scale first, then walk outward by factors of two
  for (int k = 0; k <= 40; ++k) {
    for (int sign : {1, -1}) {
      if (k == 0 && sign < 0) continue;
      const double factor = std::ldexp(1.0, sign * k);
      if (factor < 1e-6 || factor > 1e6) continue;
      auto metric = attempt(base * factor);
      if (isValidMetric(mesh, metric)) return metric;
    }
  }
  fail(ErrorCode::InitError, "no rescale in [1e-6, 1e6] yields a valid initial metric");
}

Eigen::SparseMatrix<double> curvatureJacobian(const HalfedgeMesh& mesh, const DiscreteMetric& metric) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * mesh.nFaces());
  for (int f = 0; f < mesh.nFaces(); ++f) {
    const auto g = faceGeometry(mesh, metric, f);
    std::array<double, 3> r{};
    for (int k = 0; k < 3; ++k) r[k] = metric.radius(g.vertices[k]);

    // dtheta/dl
    double dAngle[3][3];
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      const double d = std::sinh(g.lengths[k]) / (std::sinh(g.lengths[k1]) * std::sinh(g.lengths[k2]) * std::sin(g.angles[k]));
      dAngle[k][k] = d;
      dAngle[k][k1] = -d * std::cos(g.angles[k2]);
      dAngle[k][k2] = -d * std::cos(g.angles[k1]);
    }
    // dl/du: side k joins corners k+1 and k+2
    double dLength[3][3] = {};
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      const double w = metric.weights[g.edges[k]];
      dLength[k][k1] = lengthFactorDerivative(r[k1], r[k2], w, g.lengths[k]);
      dLength[k][k2] = lengthFactorDerivative(r[k2], r[k1], w, g.lengths[k]);
    }
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) {
        double value = 0.0;
        for (int e = 0; e < 3; ++e) value += dAngle[k][e] * dLength[e][m];
        triplets.emplace_back(g.vertices[k], g.vertices[m], -value);
      }
  }
  Eigen::SparseMatrix<double> jac(mesh.nVertices(), mesh.nVertices());
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

Eigen::SparseMatrix<double> curvatureJacobianFiniteDifference(const HalfedgeMesh& mesh, const DiscreteMetric& metric,
                                                              double step) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * mesh.nFaces());
  for (int f = 0; f < mesh.nFaces(); ++f) {
    const auto& tri = mesh.triangle(f);
    std::array<int, 3> edges{};
    for (int k = 0; k < 3; ++k) edges[k] = mesh.edge(3 * f + (k + 1) % 3);
    for (int m = 0; m < 3; ++m) {
      std::array<double, 3> plus{}, minus{};
      for (int sign : {1, -1}) {
        std::array<double, 3> r{};
        for (int k = 0; k < 3; ++k) r[k] = radiusFromFactor(metric.u[tri[k]] + (k == m ? sign * step : 0.0));
        std::array<double, 3> l{};
        for (int k = 0; k < 3; ++k) l[k] = circlePatternLength(r[(k + 1) % 3], r[(k + 2) % 3], metric.weights[edges[k]]);
        auto& out = sign > 0 ? plus : minus;
        for (int k = 0; k < 3; ++k) out[k] = hyp::angle(l[k], l[(k + 1) % 3], l[(k + 2) % 3]);
      }
      for (int k = 0; k < 3; ++k) triplets.emplace_back(tri[k], tri[m], -(plus[k] - minus[k]) / (2 * step));
    }
  }
  Eigen::SparseMatrix<double> jac(mesh.nVertices(), mesh.nVertices());
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

NewtonStepResult newtonStep(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const Eigen::VectorXd& target,
                            HessianMode hessian) {
  const auto state = curvature(mesh, metric);
  const Eigen::VectorXd gradient = state.K - target;
  const double residual = gradient.cwiseAbs().maxCoeff();
  if (residual == 0.0) return {metric, 0.0, 0.0};

  Eigen::SparseMatrix<double> jac = hessian == HessianMode::Analytic ? curvatureJacobian(mesh, metric)
                                                                      : curvatureJacobianFiniteDifference(mesh, metric);
  Eigen::SparseMatrix<double> identity(jac.rows(), jac.cols());
  identity.setIdentity();

  Eigen::VectorXd delta;
  bool solved = false;
  double lambda = 1e-12;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  for (int attempt = 0; attempt <= 6 && !solved; ++attempt, lambda *= 10) {
    Eigen::SparseMatrix<double> h = jac + lambda * identity;
    solver.compute(h);
    if (solver.info() != Eigen::Success) continue;
    delta = solver.solve(-gradient);
    solved = solver.info() == Eigen::Success && delta.allFinite();
  }
  if (!solved) fail(ErrorCode::SolveFailure, "curvature Jacobian is singular beyond regularization");

  const double norm0 = gradient.norm();
  double alpha = 1.0;
  for (int halving = 0; halving < 50; ++halving, alpha /= 2) {
    Eigen::VectorXd u = metric.u + alpha * delta;
    if (!u.allFinite() || u.maxCoeff() >= 0) continue;
    auto candidate = DiscreteMetric::fromConformalFactors(mesh, std::move(u), metric.weights);
    if (!isValidMetric(mesh, candidate)) continue;
    CurvatureState next;
    try {
      next = curvature(mesh, candidate);
    } catch (const Error&) {
      continue;
    }
    if ((next.K - target).norm() <= norm0) return {std::move(candidate), (next.K - target).cwiseAbs().maxCoeff(), alpha};
  }
  fail(ErrorCode::StepFailure, "line search could not find a valid non-increasing step (residual " +
                                   std::to_string(residual) + ")");
}

FlowResult flowToHyperbolic(const HalfedgeMesh& mesh, const DiscreteMetric& metric, const FlowOptions& options) {
  const Eigen::VectorXd target = Eigen::VectorXd::Zero(mesh.nVertices());
  FlowResult result;
  result.metric = metric;

  auto record = [&](int iteration, const CurvatureState& state, double stepScale) {
    FlowIterate it;
    it.iteration = iteration;
    it.residual = state.residual;
    it.stepScale = stepScale;
    it.totalArea = state.totalArea;
    it.gaussBonnetError = state.gaussBonnetError;
    it.minRadius = radiusFromFactor(result.metric.u.minCoeff());
    result.history.push_back(it);
    if (options.observer) options.observer(it);
  };
  auto converged = [&](const CurvatureState& state) {
    return state.residual <= options.tolerance && std::abs(state.K.sum()) <= options.tolerance;
  };

  auto state = curvature(mesh, result.metric);
  record(0, state, 0.0);
  while (!converged(state)) {
    if (result.iterations >= options.maxIterations)
      fail(ErrorCode::NoConvergence, "no convergence after " + std::to_string(options.maxIterations) +
                                         " iterations; residual history: " + formatHistory(result.history));
    auto step = newtonStep(mesh, result.metric, target, options.hessian);
    result.metric = std::move(step.metric);
    ++result.iterations;
    state = curvature(mesh, result.metric);
    record(result.iterations, state, step.stepScale);
  }
  result.residual = state.residual;
  result.totalArea = state.totalArea;
  return result;
}

} // namespace fnshape
