#pragma once

// Linearized free-boundary problem at the trivial RR on the mapped grid.
//
//   interior:  (c3^2 I - xi xi^T) : grad^2 psi' = 0
//   walls:     grad psi' . n = 0 on A and B
//   shock S:   g_v . grad psi' - k psi' = 0,  k = rho3 (1/z^n_u + z^n_d / c3^2)
//   corner O:  mean one-sided radial derivative = 0
//
// Every node owns one row. The reflection corner xiB owns either the shock
// condition (square system) or a pin psi'(xiB) = value. The matrix K of all
// rows but the one at xiB has the one-dimensional kernel.
//
// Derivatives are collocated finite differences in (u, v): central inside,
// three-point one-sided on the boundary; metrics use the same stencils.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reflectlab/core/errors.hpp"
#include "reflectlab/core/vec2.hpp"
#include "reflectlab/mesh.hpp"
#include "reflectlab/pencil.hpp"
#include "reflectlab/reflection.hpp"
#include "reflectlab/shock.hpp"

namespace reflectlab {

namespace fd {

template <class T, class F>
T du(const MappedGrid& g, int i, int j, F&& f) {
  const double h = g.du();
  if (i < g.N) return (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
  return (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) / (2.0 * h);
}
template <class T, class F>
T dv(const MappedGrid& g, int i, int j, F&& f) {
  const double h = g.dv();
  if (j == 0) return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * h);
  if (j == g.M) return (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) / (2.0 * h);
  return (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
}
template <class T, class F>
T duu(const MappedGrid& g, int i, int j, F&& f) {
  const double h = g.du();
  return (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (h * h);
}
template <class T, class F>
T dvv(const MappedGrid& g, int i, int j, F&& f) {
  const double h = g.dv();
  return (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (h * h);
}
template <class T, class F>
T duv(const MappedGrid& g, int i, int j, F&& f) {
  return (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) /
         (4.0 * g.du() * g.dv());
}

}  // namespace fd

template <class T>
struct LocalDerivatives {
  Vec2<T> grad;
  Sym2<T> hess;
};

/// Physical gradient (and Hessian when `second`) at grid node (i, j), i >= 1.
/// val(i, j) -> T and pos(i, j) -> Vec2<T>; both must accept i = 0 (corner O).
/// Hessians are only available at nodes with 0 < i < N, 0 < j < M.
template <class T, class Val, class Pos>
LocalDerivatives<T> localDerivatives(const MappedGrid& g, int i, int j, Val&& val, Pos&& pos,
                                     bool second) {
  auto px = [&](int a, int b) { return pos(a, b).x; };
  auto py = [&](int a, int b) { return pos(a, b).y; };
  const T xu = fd::du<T>(g, i, j, px), yu = fd::du<T>(g, i, j, py);
  const T xv = fd::dv<T>(g, i, j, px), yv = fd::dv<T>(g, i, j, py);
  const T pu = fd::du<T>(g, i, j, val), pv = fd::dv<T>(g, i, j, val);
  const T det = xu * yv - xv * yu;
  if (value(det) == 0.0) throw DomainError("localDerivatives: degenerate grid cell");
  // J = [[xu, xv], [yu, yv]], Jinv = [[yv, -xv], [-yu, xu]] / det.
  const T m00 = yv / det, m01 = -xv / det, m10 = -yu / det, m11 = xu / det;
  LocalDerivatives<T> out;
  out.grad = {m00 * pu + m10 * pv, m01 * pu + m11 * pv};
  if (second) {
    const T h00 = fd::duu<T>(g, i, j, val) - out.grad.x * fd::duu<T>(g, i, j, px) -
                  out.grad.y * fd::duu<T>(g, i, j, py);
    const T h01 = fd::duv<T>(g, i, j, val) - out.grad.x * fd::duv<T>(g, i, j, px) -
                  out.grad.y * fd::duv<T>(g, i, j, py);
    const T h11 = fd::dvv<T>(g, i, j, val) - out.grad.x * fd::dvv<T>(g, i, j, px) -
                  out.grad.y * fd::dvv<T>(g, i, j, py);
    // H = Jinv^T H' Jinv.
    const T a0 = h00 * m00 + h01 * m10, a1 = h00 * m01 + h01 * m11;
    const T b0 = h01 * m00 + h11 * m10, b1 = h01 * m01 + h11 * m11;
    out.hess.xx = m00 * a0 + m10 * b0;
    out.hess.xy = m00 * a1 + m10 * b1;
    out.hess.yy = m01 * a1 + m11 * b1;
  }
  return out;
}

enum class RowKind { corner, interior, wallA, wallB, shock, pin };

inline RowKind rowKind(const MappedGrid& g, int i, int j) {
  if (i == 0) return RowKind::corner;
  if (i == g.N) return j == g.M ? RowKind::pin : RowKind::shock;
  if (j == 0) return RowKind::wallA;
  if (j == g.M) return RowKind::wallB;
  return RowKind::interior;
}

/// Nodal field on the grid plus metadata.
struct DiscreteField {
  GridGeometry geom;
  std::vector<Vec2d> coords;
  Eigen::VectorXd values;
  Vec2d normalizationPoint{};
  double normalizationValue = NAN;
  double fittedExponent = NAN;
  std::map<std::string, double> residualNorms;

  double at(int i, int j) const { return values[geom.grid.index(i, j)]; }

  /// Bilinear interpolation in reference coordinates (base geometry).
  double interpolate(const Vec2d& x) const {
    const MappedGrid& g = geom.grid;
    const Vec2d r = geom.reference(x);
    const double fu = std::clamp(r.x * g.N, 0.0, static_cast<double>(g.N));
    const double fv = std::clamp(r.y * g.M, 0.0, static_cast<double>(g.M));
    const int i0 = std::min(static_cast<int>(fu), g.N - 1);
    const int j0 = std::min(static_cast<int>(fv), g.M - 1);
    const double a = fu - i0, b = fv - j0;
    return (1 - a) * (1 - b) * at(i0, j0) + a * (1 - b) * at(i0 + 1, j0) +
           (1 - a) * b * at(i0, j0 + 1) + a * b * at(i0 + 1, j0 + 1);
  }

  double maxAbs() const { return values.cwiseAbs().maxCoeff(); }

  /// CSV with columns x,y,psi_prime.
  void writeCsv(std::ostream& os) const {
    os.precision(17);
    os << "x,y,psi_prime\n";
    for (std::size_t k = 0; k < coords.size(); ++k)
      os << coords[k].x << ',' << coords[k].y << ',' << values[static_cast<Eigen::Index>(k)]
         << '\n';
  }
};

struct LinearizedSystem {
  TrivialRR base;
  GridGeometry geom;
  std::vector<Vec2d> coords;
  Eigen::SparseMatrix<double> square;  ///< xiB row = shock condition
  Eigen::SparseMatrix<double> K;       ///< all rows except xiB, (n-1) x n
  std::vector<RowKind> kinds;          ///< per node, of the square system
  std::vector<Vec2d> shockGv;          ///< g_v at S nodes j = 0..M
  double robin = 0.0;                  ///< k of the shock rows
  std::vector<double> cornerWeights;   ///< weights of the corner-O row on (1, j)

  int size() const { return geom.grid.size(); }
};

namespace linsolve {

inline GridGeometry baseGeometry(const TrivialRR& t, const MappedGrid& g) {
  g.validate();
  return {g, t.xiA, t.xiB.y};
}

/// Robin coefficient rho_d (1/z^n_u + z^n_d / c_d^2) of the linearized shock condition.
inline double robinCoefficient(const ObliqueShock& s) {
  const double c = s.downstream.c;
  return s.downstream.rho * (1.0 / s.znU + s.znD / (c * c));
}

/// Weights of the corner row: trapezoid average over rays of the one-sided
/// radial derivative (-3 psi_O + 4 psi_1j - psi_2j) / (2 du |X_u(0, j)|).
inline std::vector<double> cornerRowWeights(const GridGeometry& geom) {
  const MappedGrid& g = geom.grid;
  std::vector<double> w(static_cast<std::size_t>(g.M + 1));
  const double slope0 = MappedGrid::gradeSlope(0.0, g.kappa);
  for (int j = 0; j <= g.M; ++j) {
    const double trap = (j == 0 || j == g.M) ? 0.5 / g.M : 1.0 / g.M;
    w[j] = trap / (2.0 * g.du() * slope0 * norm(geom.P(j)));
  }
  return w;
}

/// Value of row (i, j) of the square linearized system applied to a field.
template <class Field>
double rowValue(const LinearizedSystem& sys, int i, int j, Field&& f) {
  const MappedGrid& g = sys.geom.grid;
  auto pos = [&](int a, int b) { return sys.coords[g.index(a, b)]; };
  switch (rowKind(g, i, j)) {
    case RowKind::corner: {
      double s = 0.0;
      for (int b = 0; b <= g.M; ++b)
        s += sys.cornerWeights[b] * (-3.0 * f(0, b) + 4.0 * f(1, b) - f(2, b));
      return s;
    }
    case RowKind::interior: {
      const auto d = localDerivatives<double>(g, i, j, f, pos, true);
      const Vec2d x = pos(i, j);
      const double c2 = sys.base.c3() * sys.base.c3();
      return (c2 - x.x * x.x) * d.hess.xx - 2.0 * x.x * x.y * d.hess.xy +
             (c2 - x.y * x.y) * d.hess.yy;
    }
    case RowKind::wallA:
      return dot(localDerivatives<double>(g, i, j, f, pos, false).grad, TrivialRR::normalA());
    case RowKind::wallB:
      return dot(localDerivatives<double>(g, i, j, f, pos, false).grad, sys.base.normalB());
    case RowKind::shock:
    case RowKind::pin: {
      const auto d = localDerivatives<double>(g, i, j, f, pos, false);
      return dot(sys.shockGv[j], d.grad) - sys.robin * f(i, j);
    }
  }
  return 0.0;
}

inline LinearizedSystem assembleLinearized(const TrivialRR& t, const MappedGrid& grid) {
  LinearizedSystem sys;
  sys.base = t;
  sys.geom = baseGeometry(t, grid);
  sys.coords = sys.geom.nodes();
  const MappedGrid& g = sys.geom.grid;
  const int n = g.size();
  sys.kinds.resize(static_cast<std::size_t>(n));
  sys.shockGv.resize(static_cast<std::size_t>(g.M + 1));
  for (int j = 0; j <= g.M; ++j) {
    const ObliqueShock s = t.reflectedAt(sys.coords[g.index(g.N, j)].y);
    sys.shockGv[j] = shock::gGradientV(s, t.gas);
  }
  sys.robin = robinCoefficient(t.reflectedAt(0.0));
  sys.cornerWeights = cornerRowWeights(sys.geom);

  // Coefficients by applying each row to indicator fields of its stencil.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 20);
  auto addRow = [&](int row, int i, int j, const std::vector<int>& stencil) {
    for (int node : stencil) {
      auto ind = [&](int a, int b) { return g.index(a, b) == node ? 1.0 : 0.0; };
      const double c = rowValue(sys, i, j, ind);
      if (c != 0.0) trip.emplace_back(row, node, c);
    }
  };
  for (int i = 0; i <= g.N; ++i) {
    for (int j = 0; j <= g.M; ++j) {
      if (i == 0 && j > 0) continue;
      const int row = g.index(i, j);
      sys.kinds[row] = rowKind(g, i, j);
      std::vector<int> stencil;
      if (i == 0) {
        stencil.push_back(0);
        for (int b = 0; b <= g.M; ++b) {
          stencil.push_back(g.index(1, b));
          stencil.push_back(g.index(2, b));
        }
      } else {
        for (int a = std::max(0, i - 2); a <= std::min(g.N, i + 2); ++a)
          for (int b = std::max(0, j - 2); b <= std::min(g.M, j + 2); ++b) {
            const int id = g.index(a, b);
            if (std::find(stencil.begin(), stencil.end(), id) == stencil.end())
              stencil.push_back(id);
          }
      }
      addRow(row, i, j, stencil);
    }
  }
  sys.square.resize(n, n);
  sys.square.setFromTriplets(trip.begin(), trip.end());
  sys.square.makeCompressed();
  sys.K = sys.square.topRows(n - 1);
  sys.K.makeCompressed();
  return sys;
}

inline DiscreteField makeField(const LinearizedSystem& sys, const Eigen::VectorXd& v) {
  DiscreteField f;
  f.geom = sys.geom;
  f.coords = sys.coords;
  f.values = v;
  f.normalizationPoint = sys.base.xiB;
  f.normalizationValue = v[sys.geom.grid.indexXiB()];
  return f;
}

namespace detail {

// K with one extra row e_node^T * scale.
inline Eigen::SparseMatrix<double> augmentWithPin(const Eigen::SparseMatrix<double>& K, int node,
                                                  double scale = 1.0) {
  const auto n = K.cols();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(K.nonZeros()) + 1);
  for (int c = 0; c < K.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, c); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  trip.emplace_back(static_cast<int>(K.rows()), node, scale);
  Eigen::SparseMatrix<double> A(K.rows() + 1, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

inline double frobenius(const Eigen::SparseMatrix<double>& A) {
  double s = 0.0;
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) s += it.value() * it.value();
  return std::sqrt(s);
}

}  // namespace detail

/// Solves K psi' = rhs together with psi'(xiB) = pinnedValue. rhs has n - 1
/// entries (one per non-pinned row).
inline DiscreteField solveWithParameter(const LinearizedSystem& sys, const Eigen::VectorXd& rhs,
                                        double pinnedValue) {
  const int n = sys.size();
  if (rhs.size() != n - 1) throw DomainError("solveWithParameter: rhs must have n - 1 entries");
  const Eigen::SparseMatrix<double> A = detail::augmentWithPin(sys.K, sys.geom.grid.indexXiB());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("solveWithParameter: factorization failed");
  Eigen::VectorXd b(n);
  b.head(n - 1) = rhs;
  b[n - 1] = pinnedValue;
  const Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw SolverError("solveWithParameter: solve failed");
  DiscreteField f = makeField(sys, x);
  const Eigen::VectorXd r = sys.K * x - rhs;
  const double scale = std::max(1.0, (detail::frobenius(sys.K) / std::sqrt(double(n))) * x.norm());
  f.residualNorms["relative"] = r.norm() / scale;
  if (!(f.residualNorms["relative"] < 1e-10)) {
    std::ostringstream os;
    os << "solveWithParameter: relative residual " << f.residualNorms["relative"];
    throw SolverError(os.str());
  }
  return f;
}

struct KernelResult {
  DiscreteField field;
  double sigmaMin = 0.0;     ///< |K k| / |k|
  double sigmaSecond = 0.0;  ///< smallest singular value of K on the complement of k
  double gap = 0.0;          ///< sigmaSecond / max(sigmaMin, eps ||K||)
  double normK = 0.0;
};

/// Smallest singular value of a square sparse matrix by inverse iteration on A^T A.
inline double smallestSingularValue(const Eigen::SparseMatrix<double>& A, int iters = 60) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) return 0.0;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(A.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = nd(rng);
  x.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd y = lu.transpose().solve(x);
    const Eigen::VectorXd z = lu.solve(y);
    const double nz = z.norm();
    if (!std::isfinite(nz) || nz == 0.0) return 0.0;
    const double next = 1.0 / std::sqrt(nz);
    x = z / nz;
    if (it > 3 && std::abs(next - sigma) <= 1e-12 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

/// One-dimensional kernel of K normalized by psi'(xiB) = 1, with a certificate
/// that no second near-null direction exists.
inline KernelResult kernelCompute(const LinearizedSystem& sys, double gapThreshold = 100.0) {
  const int n = sys.size();
  // Route via a pin at the corner O, then rescale.
  const Eigen::SparseMatrix<double> Apin = detail::augmentWithPin(sys.K, 0);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(Apin);
  if (lu.info() != Eigen::Success) throw SolverError("kernelCompute: factorization failed");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b[n - 1] = 1.0;
  Eigen::VectorXd k = lu.solve(b);
  const double atB = k[sys.geom.grid.indexXiB()];
  if (!(std::abs(atB) > 1e-12 * k.cwiseAbs().maxCoeff()))
    throw DiagnosticError("kernelCompute: kernel vanishes at xiB");
  k /= atB;
  KernelResult r;
  r.normK = detail::frobenius(sys.K);
  r.sigmaMin = (sys.K * k).norm() / k.norm();
  // Complete K by the scaled kernel direction: the smallest singular value of
  // the square matrix is then the second smallest of K.
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < sys.K.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, c); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  const Eigen::VectorXd kn = k / k.norm();
  for (int c = 0; c < n; ++c)
    if (kn[c] != 0.0) trip.emplace_back(n - 1, c, r.normK * kn[c]);
  Eigen::SparseMatrix<double> Aug(n, n);
  Aug.setFromTriplets(trip.begin(), trip.end());
  Aug.makeCompressed();
  r.sigmaSecond = smallestSingularValue(Aug);
  r.gap = r.sigmaSecond / std::max(r.sigmaMin, std::numeric_limits<double>::epsilon() * r.normK);
  r.field = makeField(sys, k);
  r.field.residualNorms["sigma_min"] = r.sigmaMin;
  r.field.residualNorms["sigma_second"] = r.sigmaSecond;
  r.field.residualNorms["gap"] = r.gap;
  if (!(r.gap > gapThreshold)) {
    std::ostringstream os;
    os << "kernelCompute: ambiguous kernel, singular-value gap " << r.gap;
    throw DiagnosticError(os.str());
  }
  return r;
}

struct ExtremumCheck {
  double maxInterior = 0.0, maxBoundary = 0.0;
  double minInterior = 0.0, minBoundary = 0.0;
  double tol = 0.0;
  bool ok = false;
};

/// Global discrete maximum principle: interior extrema may exceed the boundary
/// extrema by at most tol = factor * h^2 * ||psi'||_inf (h in physical units).
inline ExtremumCheck maximumPrincipleCheck(const DiscreteField& f, double factor = 10.0) {
  const MappedGrid& g = f.geom.grid;
  ExtremumCheck c;
  c.maxInterior = c.maxBoundary = -INFINITY;
  c.minInterior = c.minBoundary = INFINITY;
  for (int i = 0; i <= g.N; ++i)
    for (int j = 0; j <= g.M; ++j) {
      if (i == 0 && j > 0) continue;
      const double v = f.at(i, j);
      const bool boundary = g.tags(i, j) != tagNone;
      double& mx = boundary ? c.maxBoundary : c.maxInterior;
      double& mn = boundary ? c.minBoundary : c.minInterior;
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
  const double hPhys = g.h() * norm(f.geom.P(g.M));
  c.tol = factor * hPhys * hPhys * f.maxAbs();
  c.ok = c.maxInterior <= c.maxBoundary + c.tol && c.minInterior >= c.minBoundary - c.tol;
  return c;
}

struct ExponentFit {
  double exponent = NAN;
  double halfWidth = NAN;  ///< 95% interval half-width from the regression
  std::vector<double> radii;
  std::vector<double> means;
};

/// Least-squares slope of log(mean |f|) against log r over rings around `corner`
/// inside the wedge spanned ccw from dir1 to dir2. f should already have the
/// corner value (and any affine part) removed.
inline ExponentFit cornerExponentFit(const std::function<double(const Vec2d&)>& f,
                                     const Vec2d& corner, const Vec2d& dir1, const Vec2d& dir2,
                                     double rMin, double rMax, int nRadii = 12,
                                     int nAngles = 24) {
  if (nRadii < 8) throw DomainError("cornerExponentFit: fewer than 8 radii in the window");
  if (!(rMin > 0.0) || !(rMax > rMin)) throw DomainError("cornerExponentFit: bad window");
  const double a1 = std::atan2(dir1.y, dir1.x);
  double a2 = std::atan2(dir2.y, dir2.x);
  while (a2 <= a1) a2 += 2.0 * M_PI;
  ExponentFit fit;
  std::vector<double> lx, ly;
  for (int r = 0; r < nRadii; ++r) {
    const double rad = rMin * std::pow(rMax / rMin, static_cast<double>(r) / (nRadii - 1));
    double s = 0.0;
    for (int a = 0; a < nAngles; ++a) {
      const double ang = a1 + (a2 - a1) * (a + 0.5) / nAngles;
      s += std::abs(f(corner + rad * unitVector(ang)));
    }
    s /= nAngles;
    if (!(s > 0.0)) continue;
    fit.radii.push_back(rad);
    fit.means.push_back(s);
    lx.push_back(std::log(rad));
    ly.push_back(std::log(s));
  }
  const int m = static_cast<int>(lx.size());
  if (m < 8) throw DomainError("cornerExponentFit: fewer than 8 usable radii");
  double mx = 0, my = 0;
  for (int k = 0; k < m; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (int k = 0; k < m; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  fit.exponent = sxy / sxx;
  double sse = 0;
  for (int k = 0; k < m; ++k) {
    const double e = ly[k] - my - fit.exponent * (lx[k] - mx);
    sse += e * e;
  }
  fit.halfWidth = 2.0 * std::sqrt(sse / (m - 2) / sxx);
  return fit;
}

/// Affine part G of a solution at the reflection corner implied by the frozen
/// boundary conditions there: g_v . G = k psi'(xiB) and n_B . G = 0.
inline Vec2d cornerAffineGradient(const LinearizedSystem& sys, double valueAtCorner) {
  const Vec2d gv = sys.shockGv.back();
  const Vec2d nB = sys.base.normalB();
  const Mat2 A{gv.x, gv.y, nB.x, nB.y};
  return A.inverse() * Vec2d{sys.robin * valueAtCorner, 0.0};
}

/// Exponent of psi' - psi'(xiB) - G . (xi - xiB) at the reflection corner.
inline ExponentFit reflectionCornerFit(const LinearizedSystem& sys, const DiscreteField& f,
                                       double rMin, double rMax, int nRadii = 12) {
  const Vec2d c = sys.base.xiB;
  const double v0 = f.values[sys.geom.grid.indexXiB()];
  const Vec2d G = cornerAffineGradient(sys, v0);
  DiscreteField rem = f;
  for (std::size_t k = 0; k < f.coords.size(); ++k)
    rem.values[static_cast<Eigen::Index>(k)] -= v0 + dot(G, f.coords[k] - c);
  auto sampler = [&](const Vec2d& x) { return rem.interpolate(x); };
  return cornerExponentFit(sampler, c, {0.0, -1.0}, -sys.base.wallBDir(), rMin, rMax, nRadii);
}

/// Exponent of psi' - psi'(O) at the wall-wall corner O.
inline ExponentFit wallCornerFit(const DiscreteField& f, double theta, double rMin, double rMax,
                                 int nRadii = 12) {
  const double v0 = f.values[0];
  auto sampler = [&](const Vec2d& x) { return f.interpolate(x) - v0; };
  return cornerExponentFit(sampler, {0.0, 0.0}, unitVector(theta), {-1.0, 0.0}, rMin, rMax,
                           nRadii);
}

}  // namespace linsolve
}  // namespace reflectlab
