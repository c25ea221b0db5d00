#pragma once

// Structured mapped grid over the triangle Omega with vertices O (corner),
// xiA and xiB.
//
// Reference coordinates (u, v) in [0,1]^2 are uniform with N and M cells. The
// physical node is X(i, j) = s(u_i) * P(w(v_j)) with P(w) = (xiA, w * etaB), so
// u runs from O (u = 0, collapsed to one node) to S (u = 1) and v from wall A
// (v = 0) to wall B (v = 1). The maps s and w are quadratic with a fixed
// positive slope at 1; they cluster nodes toward S and toward wall B, i.e.
// toward the reflection corner xiB.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "reflectlab/core/errors.hpp"
#include "reflectlab/core/vec2.hpp"

namespace reflectlab {

enum BoundaryTag : std::uint8_t { tagNone = 0, tagA = 1, tagB = 2, tagS = 4 };

struct MappedGrid {
  int N = 32;
  int M = 32;
  double kappa = 4.0;  ///< grading strength, spacing ratio (1 + 2 kappa) : 1

  static double grade(double u, double kappa) {
    const double q = 1.0 - u;
    return 1.0 - (q + kappa * q * q) / (1.0 + kappa);
  }
  static double gradeSlope(double u, double kappa) {
    return (1.0 + 2.0 * kappa * (1.0 - u)) / (1.0 + kappa);
  }
  static double ungrade(double s, double kappa) {
    const double rhs = (1.0 - s) * (1.0 + kappa);
    const double q = kappa > 0.0 ? (-1.0 + std::sqrt(1.0 + 4.0 * kappa * rhs)) / (2.0 * kappa) : rhs;
    return 1.0 - q;
  }

  void validate() const {
    if (N < 4 || M < 4) throw DomainError("MappedGrid: need N, M >= 4");
    if (!(kappa >= 0.0)) throw DomainError("MappedGrid: kappa must be nonnegative");
  }
  double du() const { return 1.0 / N; }
  double dv() const { return 1.0 / M; }
  double s(int i) const { return grade(static_cast<double>(i) / N, kappa); }
  double w(int j) const { return grade(static_cast<double>(j) / M, kappa); }
  int size() const { return 1 + N * (M + 1); }
  /// Node index; every (0, j) is the corner O (index 0).
  int index(int i, int j) const { return i == 0 ? 0 : 1 + (i - 1) * (M + 1) + j; }
  int indexXiA() const { return index(N, 0); }
  int indexXiB() const { return index(N, M); }
  /// Reference spacing h = 1/N.
  double h() const { return 1.0 / N; }

  std::uint8_t tags(int i, int j) const {
    if (i == 0) return tagA | tagB;
    std::uint8_t t = tagNone;
    if (j == 0) t |= tagA;
    if (j == M) t |= tagB;
    if (i == N) t |= tagS;
    return t;
  }

  static MappedGrid fromH(double h, double kappa = 4.0) {
    if (!(h > 0.0) || !(h <= 0.25)) throw DomainError("MappedGrid: mesh-h must lie in (0, 0.25]");
    const int n = static_cast<int>(std::ceil(1.0 / h - 1e-9));
    return {n, n, kappa};
  }
};

/// Physical placement of the grid in the base triangle.
struct GridGeometry {
  MappedGrid grid;
  double xiA = -1.0;
  double etaB = 1.0;

  Vec2d P(int j) const { return {xiA, grid.w(j) * etaB}; }
  Vec2d node(int i, int j) const { return grid.s(i) * P(j); }
  std::vector<Vec2d> nodes() const {
    std::vector<Vec2d> out(static_cast<std::size_t>(grid.size()));
    out[0] = {0.0, 0.0};
    for (int i = 1; i <= grid.N; ++i)
      for (int j = 0; j <= grid.M; ++j) out[grid.index(i, j)] = node(i, j);
    return out;
  }
  /// Reference coordinates of a physical point of the triangle.
  Vec2d reference(const Vec2d& x) const {
    const double s = x.x / xiA;
    const double w = s > 0.0 ? x.y / (s * etaB) : 0.0;
    return {MappedGrid::ungrade(std::clamp(s, 0.0, 1.0), grid.kappa),
            MappedGrid::ungrade(std::clamp(w, 0.0, 1.0), grid.kappa)};
  }
};

/// Triangulation of the grid with boundary tags, used for dumps and checks.
struct TriangleMesh {
  std::vector<Vec2d> vertices;
  std::vector<std::uint8_t> tags;
  std::vector<std::array<int, 3>> triangles;
  int cornerO = 0;
  int cornerXiA = 0;
  int cornerXiB = 0;
  double h = 0.0;
  double kappa = 0.0;

  static TriangleMesh fromGeometry(const GridGeometry& g) {
    const MappedGrid& m = g.grid;
    TriangleMesh t;
    t.vertices = g.nodes();
    t.tags.assign(t.vertices.size(), tagNone);
    for (int i = 0; i <= m.N; ++i)
      for (int j = 0; j <= m.M; ++j) t.tags[m.index(i, j)] = m.tags(i, j);
    for (int j = 0; j < m.M; ++j) t.triangles.push_back({0, m.index(1, j), m.index(1, j + 1)});
    for (int i = 1; i < m.N; ++i)
      for (int j = 0; j < m.M; ++j) {
        const int a = m.index(i, j), b = m.index(i + 1, j), c = m.index(i + 1, j + 1),
                  d = m.index(i, j + 1);
        t.triangles.push_back({a, b, c});
        t.triangles.push_back({a, c, d});
      }
    t.cornerO = 0;
    t.cornerXiA = m.indexXiA();
    t.cornerXiB = m.indexXiB();
    t.h = m.h();
    t.kappa = m.kappa;
    return t;
  }

  double signedArea(const std::array<int, 3>& tri) const {
    const Vec2d& a = vertices[tri[0]];
    return 0.5 * cross(vertices[tri[1]] - a, vertices[tri[2]] - a);
  }
  double area() const {
    double s = 0.0;
    for (const auto& tri : triangles) s += std::abs(signedArea(tri));
    return s;
  }

  static std::string tagString(std::uint8_t t) {
    std::string s;
    if (t & tagA) s += 'A';
    if (t & tagB) s += 'B';
    if (t & tagS) s += 'S';
    return s.empty() ? "-" : s;
  }

  /// Plain-text dump:
  ///   vertices <n>            then n lines "x y tags"
  ///   triangles <m>           then m lines "a b c" (0-based vertex ids)
  ///   corners <O> <xiA> <xiB>
  void write(std::ostream& os) const {
    os.precision(17);
    os << "vertices " << vertices.size() << '\n';
    for (std::size_t k = 0; k < vertices.size(); ++k)
      os << vertices[k].x << ' ' << vertices[k].y << ' ' << tagString(tags[k]) << '\n';
    os << "triangles " << triangles.size() << '\n';
    for (const auto& tri : triangles) os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    os << "corners " << cornerO << ' ' << cornerXiA << ' ' << cornerXiB << '\n';
  }
};

}  // namespace reflectlab
