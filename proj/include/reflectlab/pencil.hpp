#pragma once

// Corner pencils of a frozen-coefficient problem
//   a:grad^2 u = 0 in the wedge, g_k . grad u = 0 on edge k (k = 1, 2).
// After a linear change of variables taking a to the identity, the homogeneous
// solutions are r^beta sin(beta (phi - phi1) - gamma1) with
//   beta_l = (gamma1 - gamma2 + pi l) / (phi2 - phi1).

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "reflectlab/core/errors.hpp"
#include "reflectlab/core/vec2.hpp"
#include "reflectlab/gas.hpp"
#include "reflectlab/reflection.hpp"
#include "reflectlab/shock.hpp"

namespace reflectlab {

struct CornerProblem {
  Sym2d interior{1.0, 0.0, 1.0};
  Vec2d edge1Dir{1.0, 0.0};  ///< edges leaving the corner; the wedge runs ccw from edge 1 to edge 2
  Vec2d edge2Dir{0.0, 1.0};
  Vec2d bc1Vec{0.0, 1.0};
  Vec2d bc2Vec{1.0, 0.0};
};

struct PencilEigenvalue {
  double beta = 0.0;
  int mult = 1;
};

struct CornerSpectrum {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  std::vector<PencilEigenvalue> betas;
  double beta0 = 0.0;
  double beta1 = 0.0;
};

struct CornerBeta0 {
  double beta0 = 0.0;
  ShockType type = ShockType::weak;
  bool consistent = false;
  CornerSpectrum spectrum;
};

namespace pencil {

inline double angleOf(const Vec2d& v) { return polarAngle(v); }

/// Symmetric inverse square root of a positive definite 2x2 matrix.
inline Mat2 inverseSqrt(const Sym2d& a) {
  const double tr = a.xx + a.yy, det = a.xx * a.yy - a.xy * a.xy;
  if (!(det > 0.0) || !(tr > 0.0))
    throw DomainError("laplacianNormalize: interior matrix is not positive definite");
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a.xx - a.yy) * (a.xx - a.yy) + a.xy * a.xy));
  const double l1 = 0.5 * tr + disc, l2 = 0.5 * tr - disc;
  if (!(l2 > 0.0)) throw DomainError("laplacianNormalize: interior matrix is not positive definite");
  // Eigenvector for l1.
  Vec2d v1 = std::abs(a.xy) > 1e-300 ? Vec2d{l1 - a.yy, a.xy}
                                     : (a.xx >= a.yy ? Vec2d{1.0, 0.0} : Vec2d{0.0, 1.0});
  v1 = normalized(v1);
  const Vec2d v2 = rotate90ccw(v1);
  const double s1 = 1.0 / std::sqrt(l1), s2 = 1.0 / std::sqrt(l2);
  return {s1 * v1.x * v1.x + s2 * v2.x * v2.x, s1 * v1.x * v1.y + s2 * v2.x * v2.y,
          s1 * v1.x * v1.y + s2 * v2.x * v2.y, s1 * v1.y * v1.y + s2 * v2.y * v2.y};
}

struct Normalized {
  Mat2 transform;
  CornerProblem problem;
};

/// T = R a^{-1/2} with the rotation R chosen so that edge 2 keeps its direction.
inline Normalized laplacianNormalize(const CornerProblem& p) {
  const Mat2 s = inverseSqrt(p.interior);
  const Vec2d d2 = s * p.edge2Dir;
  const double rot = std::atan2(cross(d2, p.edge2Dir), dot(d2, p.edge2Dir));
  const double c = std::cos(rot), sn = std::sin(rot);
  const Mat2 t = Mat2{c, -sn, sn, c} * s;
  Normalized out;
  out.transform = t;
  out.problem.interior = {1.0, 0.0, 1.0};
  out.problem.edge1Dir = normalized(t * p.edge1Dir);
  out.problem.edge2Dir = normalized(t * p.edge2Dir);
  out.problem.bc1Vec = t * p.bc1Vec;
  out.problem.bc2Vec = t * p.bc2Vec;
  return out;
}

/// Eigenvalues beta_l for l = -count..count, sorted; beta = 0 carries multiplicity 2.
inline CornerSpectrum pencilSpectrum(double phi1, double phi2, double gamma1, double gamma2,
                                     int count = 4) {
  if (!(phi2 > phi1)) throw DomainError("pencilSpectrum: phi2 must exceed phi1");
  CornerSpectrum s;
  s.phi1 = phi1;
  s.phi2 = phi2;
  s.gamma1 = gamma1;
  s.gamma2 = gamma2;
  const double w = phi2 - phi1;
  s.beta0 = (gamma1 - gamma2) / w;
  s.beta1 = s.beta0 + M_PI / w;
  for (int l = -count; l <= count; ++l) {
    const double b = s.beta0 + M_PI * l / w;
    s.betas.push_back({b, std::abs(b) < 1e-14 ? 2 : 1});
  }
  return s;
}

/// Normalized angles of a corner problem; gamma_k is the ccw angle from edge k to
/// bc vector k, reduced to gamma1 in [0, pi) and gamma2 in (gamma1 - pi, gamma1].
inline CornerSpectrum cornerSpectrum(const CornerProblem& p, int count = 4) {
  const Normalized nz = laplacianNormalize(p);
  const CornerProblem& q = nz.problem;
  const double phi1 = angleOf(q.edge1Dir);
  double phi2 = angleOf(q.edge2Dir);
  while (phi2 <= phi1) phi2 += 2.0 * M_PI;
  double g1 = std::fmod(angleOf(q.bc1Vec) - phi1, M_PI);
  if (g1 < 0.0) g1 += M_PI;
  double g2 = std::fmod(angleOf(q.bc2Vec) - phi2, M_PI);
  // Tolerance keeps gamma2 = gamma1 (Neumann-Neumann) from flipping a branch on rounding.
  const double eps = 1e-12;
  while (g2 > g1 + eps) g2 -= M_PI;
  while (g2 <= g1 - M_PI + eps) g2 += M_PI;
  return pencilSpectrum(phi1, phi2, g1, g2, count);
}

/// Harmonic eigenfunction r^beta sin(beta (phi - phi1) - gamma1) in normalized coordinates.
inline double eigenfunction(const CornerSpectrum& s, double beta, const Vec2d& x) {
  const double r = norm(x);
  double phi = std::atan2(x.y, x.x);
  while (phi < s.phi1) phi += 2.0 * M_PI;
  while (phi >= s.phi1 + 2.0 * M_PI) phi -= 2.0 * M_PI;
  return std::pow(r, beta) * std::sin(beta * (phi - s.phi1) - s.gamma1);
}

/// Frozen corner problem at the point where a shock meets a wall; the wall is
/// parallel to the downstream pseudo-velocity, the shock edge runs in the
/// direction of the tangential pseudo-velocity.
inline CornerProblem shockWallCorner(const ObliqueShock& s, const GasConstants& k) {
  const Vec2d zd = s.zD();
  const double c = s.downstream.c;
  CornerProblem p;
  p.interior = {c * c - zd.x * zd.x, -zd.x * zd.y, c * c - zd.y * zd.y};
  if (s.zt == 0.0) throw DomainError("shockWallCorner: normal shock, corner undefined");
  const Vec2d shockDir = (s.zt > 0.0 ? 1.0 : -1.0) * s.tangent;
  const Vec2d wallDir = normalized(zd);
  const Vec2d gv = shock::gGradientV(s, k);
  const Vec2d wallNormal = rotate90ccw(wallDir);
  if (cross(shockDir, wallDir) > 0.0) {
    p.edge1Dir = shockDir;
    p.bc1Vec = gv;
    p.edge2Dir = wallDir;
    p.bc2Vec = wallNormal;
  } else {
    p.edge1Dir = wallDir;
    p.bc1Vec = wallNormal;
    p.edge2Dir = shockDir;
    p.bc2Vec = gv;
  }
  return p;
}

/// beta0 at a shock-wall corner with the type check
/// beta0 in (0,1) <=> strong, beta0 = 1 <=> critical, beta0 > 1 <=> weak.
inline CornerBeta0 shockCornerBeta0(const ObliqueShock& s, const GasConstants& k,
                                    double typeTol = 1e-10) {
  CornerBeta0 out;
  out.spectrum = cornerSpectrum(shockWallCorner(s, k));
  out.beta0 = out.spectrum.beta0;
  out.type = shock::classifyType(s, k, typeTol);
  const double b = out.beta0;
  switch (out.type) {
    case ShockType::weak: out.consistent = b > 1.0; break;
    case ShockType::strong: out.consistent = b > 0.0 && b < 1.0; break;
    case ShockType::critical: out.consistent = std::abs(b - 1.0) < 1e-6; break;
  }
  return out;
}

/// beta0 at the reflection corner xiB of a trivial RR. Disagreement between the
/// shock type and the beta0 window is reported as a diagnostic failure.
inline CornerBeta0 reflectionCornerBeta0(const TrivialRR& t) {
  CornerBeta0 out = shockCornerBeta0(t.reflected, t.gas);
  if (!out.consistent) {
    std::ostringstream os;
    os << "reflectionCornerBeta0: beta0 = " << out.beta0 << " contradicts shock type "
       << toString(out.type);
    throw DiagnosticError(os.str());
  }
  return out;
}

/// Corner between wall B (edge 1) and wall A (edge 2) at the origin, Neumann on both.
inline CornerProblem wallWallCorner(double theta) {
  CornerProblem p;
  p.edge1Dir = unitVector(theta);
  p.edge2Dir = unitVector(M_PI);
  p.bc1Vec = rotate90ccw(p.edge1Dir);
  p.bc2Vec = rotate90ccw(p.edge2Dir);
  return p;
}

/// Corner at xiA between wall A (edge 1, pointing away from the origin) and the
/// shock S (edge 2, pointing up). In Omega the frozen operator there is
/// c^2 I - xiA xiA^T and the shock condition is oblique with g_v from S.
inline CornerProblem wallShockCornerA(const TrivialRR& t) {
  CornerProblem p;
  const double c = t.c3(), x = t.xiA;
  p.interior = {c * c - x * x, 0.0, c * c};
  p.edge1Dir = {1.0, 0.0};
  p.edge2Dir = {0.0, 1.0};
  p.bc1Vec = {0.0, 1.0};
  p.bc2Vec = shock::gGradientV(t.reflectedAt(0.0), t.gas);
  return p;
}

}  // namespace pencil
}  // namespace reflectlab
