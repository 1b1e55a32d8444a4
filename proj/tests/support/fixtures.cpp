#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace fnshape::fixtures {

TriangleSoup tetrahedron() {
  TriangleSoup s;
  s.positions = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  s.triangles = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return s;
}

TriangleSoup octahedron() {
  TriangleSoup s;
  s.positions = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  s.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return s;
}

TriangleSoup icosahedron() {
  const double t = (1 + std::sqrt(5.0)) / 2;
  TriangleSoup s;
  s.positions = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                 {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : s.positions) p.normalize();
  s.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return s;
}

TriangleSoup icosphere(int level) {
  auto s = icosahedron();
  for (int k = 0; k < level; ++k) {
    s = subdivide(s);
    for (auto& p : s.positions) p.normalize();
  }
  return s;
}

TriangleSoup torus(const TorusOptions& o) {
  TriangleSoup s;
  const double tau = 2 * std::numbers::pi;
  for (int i = 0; i < o.nu; ++i)
    for (int j = 0; j < o.nv; ++j) {
      const double u = tau * i / o.nu;
      const double v = tau * (j + static_cast<double>(o.shear) * i / o.nu) / o.nv;
      const double rho = o.major + o.minor * std::cos(v);
      s.positions.emplace_back(rho * std::cos(u), rho * std::sin(u), o.minor * std::sin(v));
    }
  for (int i = 0; i < o.nu; ++i)
    for (int j = 0; j < o.nv; ++j) {
      // going once around u lands on tube index j - shear
      const int jn = i + 1 == o.nu ? j - o.shear : j;
      const int a = torusVertex(o, i, j), b = torusVertex(o, i + 1, jn);
      const int c = torusVertex(o, i + 1, jn + 1), d = torusVertex(o, i, j + 1);
      if (!o.alternate || (i + j) % 2 == 0) {
        s.triangles.push_back({a, b, c});
        s.triangles.push_back({a, c, d});
      } else {
        s.triangles.push_back({a, b, d});
        s.triangles.push_back({b, c, d});
      }
    }
  return s;
}

namespace {

TriangleSoup compact(const TriangleSoup& soup) {
  std::vector<int> map(soup.positions.size(), -1);
  TriangleSoup out;
  for (const auto& t : soup.triangles)
    for (int v : t) map[v] = 0;
  for (size_t v = 0; v < map.size(); ++v)
    if (map[v] == 0) {
      map[v] = static_cast<int>(out.positions.size());
      out.positions.push_back(soup.positions[v]);
    }
  for (const auto& t : soup.triangles) out.triangles.push_back({map[t[0]], map[t[1]], map[t[2]]});
  return out;
}

} // namespace

TriangleSoup removeVertexStar(const TriangleSoup& soup, int v) {
  TriangleSoup out;
  out.positions = soup.positions;
  for (const auto& t : soup.triangles)
    if (t[0] != v && t[1] != v && t[2] != v) out.triangles.push_back(t);
  return compact(out);
}

TriangleSoup doubleTorus(const TorusOptions& o) {
  const auto a = torus(o);
  const int n = static_cast<int>(a.positions.size());
  const double plane = o.major + o.minor;
  std::vector<char> link(n, 0);
  for (const auto& t : a.triangles)
    if (t[0] == 0 || t[1] == 0 || t[2] == 0)
      for (int v : t)
        if (v != 0) link[v] = 1;

  TriangleSoup s;
  s.positions = a.positions;
  for (int v = 0; v < n; ++v)
    if (link[v]) s.positions[v].x() = plane;
  std::vector<int> mirrorId(n);
  for (int v = 0; v < n; ++v) {
    if (link[v]) {
      mirrorId[v] = v;
    } else {
      mirrorId[v] = static_cast<int>(s.positions.size());
      Vec3 p = a.positions[v];
      p.x() = 2 * plane - p.x();
      s.positions.push_back(p);
    }
  }
  for (const auto& t : a.triangles) {
    if (t[0] == 0 || t[1] == 0 || t[2] == 0) continue;
    s.triangles.push_back(t);
    s.triangles.push_back({mirrorId[t[0]], mirrorId[t[2]], mirrorId[t[1]]});
  }
  return compact(s);
}

TriangleSoup subdivide(const TriangleSoup& soup) {
  TriangleSoup out;
  out.positions = soup.positions;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(out.positions.size());
    out.positions.push_back((soup.positions[a] + soup.positions[b]) / 2);
    midpoint.emplace(key, id);
    return id;
  };
  for (const auto& t : soup.triangles) {
    const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({t[1], bc, ab});
    out.triangles.push_back({t[2], ca, bc});
    out.triangles.push_back({ab, bc, ca});
  }
  return out;
}

TriangleSoup relabel(const TriangleSoup& soup, const std::vector<int>& perm, unsigned seed) {
  TriangleSoup out;
  out.positions.resize(soup.positions.size());
  for (size_t v = 0; v < perm.size(); ++v) out.positions[perm[v]] = soup.positions[v];
  std::mt19937 rng(seed);
  for (const auto& t : soup.triangles) {
    Triangle r{perm[t[0]], perm[t[1]], perm[t[2]]};
    std::rotate(r.begin(), r.begin() + rng() % 3, r.end());
    out.triangles.push_back(r);
  }
  std::shuffle(out.triangles.begin(), out.triangles.end(), rng);
  return out;
}

TriangleSoup jitterRadially(const TriangleSoup& soup, double amount, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(1 - amount, 1 + amount);
  auto out = soup;
  for (auto& p : out.positions) p *= dist(rng);
  return out;
}

TriangleSoup scaled(TriangleSoup soup, double factor) {
  for (auto& p : soup.positions) p *= factor;
  return soup;
}

CutCurve mirrorSeam(const HalfedgeMesh& mesh, const TorusOptions& o) {
  const double plane = o.major + o.minor;
  auto firstSide = [&](int f) {
    double x = 0;
    for (int v : mesh.triangle(f)) x += mesh.position(v).x();
    return x / 3 < plane;
  };
  std::vector<int> nextOf(mesh.nVertices(), -1);
  int start = -1;
  for (int h = 0; h < mesh.nHalfedges(); ++h)
    if (firstSide(mesh.face(h)) && !firstSide(mesh.face(mesh.twin(h)))) {
      nextOf[mesh.origin(h)] = mesh.dest(h);
      if (start < 0 || mesh.origin(h) < start) start = mesh.origin(h);
    }
  CutCurve c;
  for (int v = start; c.vertices.empty() || v != start; v = nextOf[v]) c.vertices.push_back(v);
  return c;
}

std::vector<int> mirrorMap(const HalfedgeMesh& mesh, const TorusOptions& o) {
  const double plane = o.major + o.minor;
  std::vector<int> map(mesh.nVertices());
  for (int v = 0; v < mesh.nVertices(); ++v) {
    Vec3 p = mesh.position(v);
    p.x() = 2 * plane - p.x();
    map[v] = nearestVertex(mesh, p);
  }
  return map;
}

int nearestVertex(const HalfedgeMesh& mesh, const Vec3& p) {
  int best = 0;
  for (int v = 1; v < mesh.nVertices(); ++v)
    if ((mesh.position(v) - p).squaredNorm() < (mesh.position(best) - p).squaredNorm()) best = v;
  return best;
}

} // namespace fnshape::fixtures
