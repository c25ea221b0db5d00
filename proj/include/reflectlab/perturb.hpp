#pragma once

// Nonlinear free-boundary problem near a trivial RR, solved by Newton's method.
//
// Unknowns are psi at the grid nodes (fixed reference coordinates). The shock
// S is fitted: the node (N, j) sits on the ray through P_j = xiA (1, w_j tan
// theta) at the point where the sector-2 potential equals psi(N, j), and the
// whole column j is scaled with it. Rows are the interior equation
// (c^2 I - grad chi grad chi^T) : grad^2 psi = 0, slip on A and B, the shock
// condition g = 0 on S, the corner-O row of the linear system, and the pin
// psi(xiB) = psi^I(xiB) fixing the reflection point.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "reflectlab/core/dual.hpp"
#include "reflectlab/core/errors.hpp"
#include "reflectlab/core/vec2.hpp"
#include "reflectlab/gas.hpp"
#include "reflectlab/linsolve.hpp"
#include "reflectlab/mesh.hpp"
#include "reflectlab/pencil.hpp"
#include "reflectlab/reflection.hpp"
#include "reflectlab/shock.hpp"

namespace reflectlab {

/// Shock ray solve failed (psi^I not monotone along the ray or the point left
/// the admissible side of the corner).
class TransformError : public DomainError {
 public:
  explicit TransformError(const std::string& what) : DomainError(what) {}
};

/// Everything the nonlinear residual needs for one parameter set.
struct PerturbSetup {
  TrivialRR base;
  GridGeometry geom;  ///< base placement, defines the reference coordinates
  ReflectionParams params;
  LocalConfiguration local;
  GasConstants gas;
  double theta = 0.0;
  Vec2d normalB{};
  std::vector<Vec2d> rays;  ///< P_j for the new wall angle
  UpstreamPotential upstream;
  double pin = 0.0;
  std::vector<double> cornerWeights;
  std::vector<double> rowScale;  ///< 1 / row max-norm of the Jacobian at psi0; empty = unscaled

  int size() const { return geom.grid.size(); }
};

struct ResidualNorms {
  double interior = 0.0;
  double wallA = 0.0;
  double wallB = 0.0;
  double shock = 0.0;
  double corner = 0.0;
  double pin = 0.0;
  double max() const { return std::max({interior, wallA, wallB, shock, corner, pin}); }
};

struct PerturbedRR {
  TrivialRR base;
  ReflectionParams params;
  DiscreteField field;             ///< psi; coords are the physical node positions
  std::vector<Vec2d> shockCurve;   ///< physical S nodes, j = 0..M
  ResidualNorms residualNorms;
  int iterations = 0;              ///< Newton iterations of the final continuation step
  int continuationSteps = 0;
  std::vector<double> residualHistory;
  std::vector<double> quadraticRatios;  ///< r_{k+1} / r_k^2 above the round-off floor
  std::vector<double> stepRatios;       ///< |d_{k+1}| / |d_k|^2 of the Newton corrections
  bool weakType = false;
  bool transonic = false;
  bool shockSingleValued = false;
  double ellipticityMargin = 0.0;  ///< 1 - max over nodes of |grad chi| / c
  double displacement = 0.0;       ///< horizontal shift of the shock foot on wall A
  Vec2d xiB{};
  double beta0 = NAN;
  double localRRMismatch = NAN;  ///< |z_d(grid) - z_d(weak polar root)| / |z_d| at xiB
  double maxShockResidual = 0.0;
};

struct NewtonOptions {
  double tol = 1e-8;
  /// The system is poorly conditioned along the near-kernel direction, so a
  /// small residual alone does not fix psi; the last correction must be small too.
  double stepTol = 1e-10;
  int maxIter = 30;
  int maxHalvings = 6;
};

namespace perturb {

inline Eigen::SparseMatrix<double> jacobian(const PerturbSetup& s, const Eigen::VectorXd& psi);

inline PerturbSetup makeSetup(const TrivialRR& base, const MappedGrid& grid,
                              const ReflectionParams& params) {
  PerturbSetup s;
  s.base = base;
  s.gas = base.gas;
  s.geom = linsolve::baseGeometry(base, grid);
  s.params = params;
  s.local = reflection::localConfiguration(params, base.sector1.rho, base.gas);
  if (!(s.local.rB > 0.0))
    throw RegimeError("perturb: reflection point not on wall B for these parameters");
  s.theta = params.theta;
  s.normalB = {std::sin(s.theta), -std::cos(s.theta)};
  const double tanT = std::tan(s.theta);
  s.rays.resize(static_cast<std::size_t>(grid.M + 1));
  for (int j = 0; j <= grid.M; ++j) s.rays[j] = {base.xiA, base.xiA * grid.w(j) * tanT};
  s.upstream = s.local.sector2();
  s.pin = s.upstream.psi(s.local.xiB);
  s.cornerWeights = linsolve::cornerRowWeights(s.geom);
  // Equilibrate rows (interior rows scale like h^-2, boundary rows like h^-1)
  // so that the max-norm merit function is meaningful.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> J =
      jacobian(s, Eigen::VectorXd::Constant(grid.size(), base.psi0));
  s.rowScale.assign(static_cast<std::size_t>(grid.size()), 1.0);
  for (int r = 0; r < J.outerSize(); ++r) {
    double m = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(J, r); it; ++it)
      m = std::max(m, std::abs(it.value()));
    if (m > 0.0) s.rowScale[r] = 1.0 / m;
  }
  return s;
}

inline Eigen::VectorXd basePsi(const PerturbSetup& s) {
  return Eigen::VectorXd::Constant(s.size(), s.base.psi0);
}

/// Scale factors lambda_j of the shock rays: psi^I(lambda_j P_j) = psi(N, j).
template <class T, class Psi>
std::vector<T> shockScales(const PerturbSetup& s, Psi&& psi) {
  const MappedGrid& g = s.geom.grid;
  std::vector<T> lam(static_cast<std::size_t>(g.M + 1));
  for (int j = 0; j <= g.M; ++j) {
    // psi^I is affine, so the ray equation is linear in lambda.
    const double slope = dot(s.upstream.velocity, s.rays[j]);
    if (!(std::abs(slope) > 0.0)) throw TransformError("shockPullback: psi^I constant along ray");
    lam[j] = (psi(g.N, j) - s.upstream.psi0) / slope;
    if (!(value(lam[j]) > 0.0)) {
      std::ostringstream os;
      os << "shockPullback: shock point left the domain on ray " << j;
      throw TransformError(os.str());
    }
  }
  return lam;
}

/// Physical node positions for a psi field.
inline std::vector<Vec2d> shockPullback(const PerturbSetup& s, const Eigen::VectorXd& psi) {
  const MappedGrid& g = s.geom.grid;
  auto val = [&](int i, int j) { return psi[g.index(i, j)]; };
  const std::vector<double> lam = shockScales<double>(s, val);
  std::vector<Vec2d> out(static_cast<std::size_t>(g.size()));
  out[0] = {0.0, 0.0};
  for (int i = 1; i <= g.N; ++i)
    for (int j = 0; j <= g.M; ++j) out[g.index(i, j)] = g.s(i) * lam[j] * s.rays[j];
  return out;
}

/// Residual of every row, ordered by node index.
template <class T>
std::vector<T> residual(const PerturbSetup& s, const std::vector<T>& psi) {
  const MappedGrid& g = s.geom.grid;
  const GasConstants& k = s.gas;
  auto val = [&](int i, int j) -> T { return psi[g.index(i, j)]; };
  const std::vector<T> lam = shockScales<T>(s, val);
  auto pos = [&](int i, int j) -> Vec2<T> {
    if (i == 0) return {T(0.0), T(0.0)};
    const double si = g.s(i);
    return {si * lam[j] * s.rays[j].x, si * lam[j] * s.rays[j].y};
  };
  std::vector<T> out(static_cast<std::size_t>(g.size()));
  {
    T c(0.0);
    for (int b = 0; b <= g.M; ++b)
      c += s.cornerWeights[b] * (-3.0 * val(0, b) + 4.0 * val(1, b) - val(2, b));
    out[0] = c;
  }
  for (int i = 1; i <= g.N; ++i) {
    for (int j = 0; j <= g.M; ++j) {
      const int row = g.index(i, j);
      switch (rowKind(g, i, j)) {
        case RowKind::interior: {
          const auto d = localDerivatives<T>(g, i, j, val, pos, true);
          const Vec2<T> x = pos(i, j);
          const Vec2<T> gc = d.grad - x;
          const T chi = val(i, j) - 0.5 * norm2(x);
          const T c2 = (k.gamma - 1.0) * (-chi - 0.5 * norm2(gc));
          if (!(value(c2) > 0.0)) {
            std::ostringstream os;
            os << "nonlinearResidual: vacuum at " << value(x);
            throw VacuumError(os.str());
          }
          if (!(value(norm2(gc)) < value(c2))) {
            std::ostringstream os;
            os << "nonlinearResidual: ellipticity lost at " << value(x);
            throw RegimeError(os.str());
          }
          out[row] = (c2 - gc.x * gc.x) * d.hess.xx - 2.0 * gc.x * gc.y * d.hess.xy +
                     (c2 - gc.y * gc.y) * d.hess.yy;
          break;
        }
        case RowKind::wallA: {
          const auto d = localDerivatives<T>(g, i, j, val, pos, false);
          out[row] = -d.grad.y;
          break;
        }
        case RowKind::wallB: {
          const auto d = localDerivatives<T>(g, i, j, val, pos, false);
          out[row] = d.grad.x * s.normalB.x + d.grad.y * s.normalB.y;
          break;
        }
        case RowKind::shock: {
          const auto d = localDerivatives<T>(g, i, j, val, pos, false);
          out[row] = shock::gResidual(d.grad, val(i, j), pos(i, j), s.upstream, k);
          break;
        }
        case RowKind::pin:
          out[row] = val(i, j) - s.pin;
          break;
        case RowKind::corner:
          break;
      }
    }
  }
  if (!s.rowScale.empty())
    for (std::size_t r = 0; r < out.size(); ++r) out[r] *= s.rowScale[r];
  return out;
}

inline Eigen::VectorXd residual(const PerturbSetup& s, const Eigen::VectorXd& psi) {
  std::vector<double> p(psi.data(), psi.data() + psi.size());
  const std::vector<double> r = residual<double>(s, p);
  return Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
}

inline ResidualNorms residualNorms(const PerturbSetup& s, const Eigen::VectorXd& r) {
  const MappedGrid& g = s.geom.grid;
  ResidualNorms n;
  n.corner = std::abs(r[0]);
  for (int i = 1; i <= g.N; ++i)
    for (int j = 0; j <= g.M; ++j) {
      const double v = std::abs(r[g.index(i, j)]);
      switch (rowKind(g, i, j)) {
        case RowKind::interior: n.interior = std::max(n.interior, v); break;
        case RowKind::wallA: n.wallA = std::max(n.wallA, v); break;
        case RowKind::wallB: n.wallB = std::max(n.wallB, v); break;
        case RowKind::shock: n.shock = std::max(n.shock, v); break;
        case RowKind::pin: n.pin = std::max(n.pin, v); break;
        case RowKind::corner: break;
      }
    }
  return n;
}

/// Colour classes for the Jacobian: no row depends on two nodes of one colour
/// (the corner row, which couples all rays, is filled in directly).
inline int colorOf(const MappedGrid& g, int i, int j) {
  if (i == 0) return 30;
  if (i == g.N) return 25 + j % 5;
  return (i % 5) * 5 + j % 5;
}
constexpr int colorCount = 31;

/// Exact Jacobian by forward-mode differentiation, one pass per colour.
inline Eigen::SparseMatrix<double> jacobian(const PerturbSetup& s, const Eigen::VectorXd& psi) {
  const MappedGrid& g = s.geom.grid;
  const int n = g.size();
  std::vector<int> color(static_cast<std::size_t>(n));
  for (int i = 0; i <= g.N; ++i)
    for (int j = 0; j <= g.M; ++j) color[g.index(i, j)] = colorOf(g, i, j);
  // Structural dependencies of each row (superset).
  auto deps = [&](int i, int j) {
    std::vector<int> d;
    auto add = [&](int id) {
      if (std::find(d.begin(), d.end(), id) == d.end()) d.push_back(id);
    };
    for (int a = std::max(0, i - 2); a <= std::min(g.N, i + 2); ++a)
      for (int b = std::max(0, j - 2); b <= std::min(g.M, j + 2); ++b) add(g.index(a, b));
    for (int b = std::max(0, j - 2); b <= std::min(g.M, j + 2); ++b) add(g.index(g.N, b));
    return d;
  };
  std::vector<std::vector<int>> rowDeps(static_cast<std::size_t>(n));
  for (int i = 1; i <= g.N; ++i)
    for (int j = 0; j <= g.M; ++j) rowDeps[g.index(i, j)] = deps(i, j);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 30);
  // Corner row: linear with known weights.
  double w0 = 0.0;
  for (int b = 0; b <= g.M; ++b) {
    w0 += -3.0 * s.cornerWeights[b];
    trip.emplace_back(0, g.index(1, b), 4.0 * s.cornerWeights[b]);
    trip.emplace_back(0, g.index(2, b), -s.cornerWeights[b]);
  }
  trip.emplace_back(0, 0, w0);
  if (!s.rowScale.empty())
    for (auto& t : trip) t = {t.row(), t.col(), t.value() * s.rowScale[0]};

  std::vector<Dual> x(static_cast<std::size_t>(n));
  for (int c = 0; c < colorCount; ++c) {
    bool any = false;
    for (int id = 0; id < n; ++id) {
      const bool seed = color[id] == c;
      any = any || seed;
      x[id] = Dual(psi[id], seed ? 1.0 : 0.0);
    }
    if (!any) continue;
    const std::vector<Dual> r = residual<Dual>(s, x);
    for (int row = 1; row < n; ++row) {
      if (r[row].d == 0.0) continue;
      for (int id : rowDeps[row])
        if (color[id] == c) {
          trip.emplace_back(row, id, r[row].d);
          break;
        }
    }
  }
  Eigen::SparseMatrix<double> J(n, n);
  J.setFromTriplets(trip.begin(), trip.end());
  J.makeCompressed();
  return J;
}

struct NewtonRun {
  Eigen::VectorXd psi;
  std::vector<double> history;
  std::vector<double> steps;  ///< max-norm of each accepted correction
  int iterations = 0;
  bool converged = false;
  std::string failure;
};

/// Damped Newton at fixed parameters; always takes at least one step.
inline NewtonRun newtonIterate(const PerturbSetup& s, Eigen::VectorXd psi,
                               const NewtonOptions& opt) {
  NewtonRun run;
  Eigen::VectorXd r;
  try {
    r = residual(s, psi);
  } catch (const DomainError& e) {
    run.failure = e.what();
    run.psi = psi;
    return run;
  }
  double rn = r.lpNorm<Eigen::Infinity>();
  run.history.push_back(rn);
  for (int it = 0; it < opt.maxIter; ++it) {
    if (it > 0 && rn < opt.tol && run.steps.back() < opt.stepTol) break;
    const Eigen::SparseMatrix<double> J = jacobian(s, psi);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      run.failure = "Jacobian factorization failed";
      break;
    }
    const Eigen::VectorXd step = lu.solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.maxHalvings; ++h, lambda *= 0.5) {
      try {
        const Eigen::VectorXd trial = psi + lambda * step;
        const Eigen::VectorXd rt = residual(s, trial);
        const double tn = rt.lpNorm<Eigen::Infinity>();
        if (tn < rn || tn < opt.tol) {
          psi = trial;
          r = rt;
          rn = tn;
          run.steps.push_back(lambda * step.lpNorm<Eigen::Infinity>());
          accepted = true;
          break;
        }
      } catch (const DomainError&) {
      }
    }
    ++run.iterations;
    if (!accepted) {
      run.failure = "line search failed";
      break;
    }
    run.history.push_back(rn);
  }
  run.psi = psi;
  run.converged = rn < opt.tol && !run.steps.empty() && run.steps.back() < opt.stepTol &&
                  run.failure.empty();
  if (!run.converged && run.failure.empty()) run.failure = "maximum iterations reached";
  return run;
}

inline ReflectionParams interpolate(const ReflectionParams& a, const ReflectionParams& b,
                                    double t) {
  return {a.M1 + t * (b.M1 - a.M1), a.alpha + t * (b.alpha - a.alpha),
          a.theta + t * (b.theta - a.theta), a.gamma};
}

/// Diagnostics of a converged field.
inline PerturbedRR analyze(const PerturbSetup& s, const Eigen::VectorXd& psi) {
  const MappedGrid& g = s.geom.grid;
  const GasConstants& k = s.gas;
  PerturbedRR out;
  out.base = s.base;
  out.params = s.params;
  const std::vector<Vec2d> coords = shockPullback(s, psi);
  out.field.geom = s.geom;
  out.field.coords = coords;
  out.field.values = psi;
  out.field.normalizationPoint = s.local.xiB;
  out.field.normalizationValue = psi[g.indexXiB()];
  out.residualNorms = residualNorms(s, residual(s, psi));
  for (int j = 0; j <= g.M; ++j) out.shockCurve.push_back(coords[g.index(g.N, j)]);
  out.shockSingleValued = true;
  for (int j = 1; j <= g.M; ++j)
    if (!(out.shockCurve[j].y > out.shockCurve[j - 1].y)) out.shockSingleValued = false;
  out.displacement = out.shockCurve[0].x - s.base.xiA;
  out.xiB = out.shockCurve.back();

  auto val = [&](int i, int j) { return psi[g.index(i, j)]; };
  auto pos = [&](int i, int j) { return coords[g.index(i, j)]; };
  double maxL = 0.0;
  for (int i = 1; i <= g.N; ++i)
    for (int j = 0; j <= g.M; ++j) {
      const auto d = localDerivatives<double>(g, i, j, val, pos, false);
      const Vec2d x = pos(i, j);
      const double rho = gas::densityFromPsi(val(i, j), d.grad, x, k);
      maxL = std::max(maxL, norm(d.grad - x) / gas::soundSpeed(rho, k));
      if (i == g.N && j < g.M) {  // xiB carries the pin, not the shock condition
        const double gr = shock::gResidual(d.grad, val(i, j), x, s.upstream, k);
        out.maxShockResidual = std::max(out.maxShockResidual, std::abs(gr));
      }
    }
  out.ellipticityMargin = 1.0 - maxL;

  const auto dB = localDerivatives<double>(g, g.N, g.M, val, pos, false);
  const double rhoB = gas::densityFromPsi(val(g.N, g.M), dB.grad, out.xiB, k);
  const ThermoState down = ThermoState::make(rhoB, dB.grad, k);
  const ObliqueShock sb = shock::fromStates(s.upstream.state(k), down, out.xiB);
  out.weakType = shock::classifyType(sb, k) == ShockType::weak;
  out.transonic = sb.downstreamPseudoMach() < 1.0;
  try {
    out.beta0 = pencil::shockCornerBeta0(sb, k).beta0;
  } catch (const DomainError&) {
  }
  try {
    const auto lrr = reflection::localRR(s.local.M2, s.local.tau, k);
    // The weak root in the polar frame; compare magnitudes and density.
    const double zPolar = lrr.roots.weak.downstreamPseudoMach();
    const double zGrid = sb.downstreamPseudoMach();
    out.localRRMismatch = std::abs(zGrid - zPolar) / zPolar;
  } catch (const DomainError&) {
  }
  return out;
}

/// Newton continuation from the base trivial RR to `target`, halving the
/// continuation step on failure.
inline PerturbedRR newtonSolve(const TrivialRR& base, const ReflectionParams& target,
                               const MappedGrid& grid, const NewtonOptions& opt = {}) {
  const ReflectionParams p0 = base.params;
  double done = 0.0, step = 1.0;
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(grid.size(), base.psi0);
  NewtonRun last;
  PerturbSetup setup;
  int steps = 0;
  while (true) {
    const double t = std::min(1.0, done + step);
    PerturbSetup trial;
    NewtonRun run;
    try {
      trial = makeSetup(base, grid, interpolate(p0, target, t));
      run = newtonIterate(trial, psi, opt);
    } catch (const DomainError& e) {
      run.failure = e.what();
    }
    if (run.converged) {
      done = t;
      psi = run.psi;
      last = run;
      setup = trial;
      ++steps;
      if (done >= 1.0) break;
      continue;
    }
    step *= 0.5;
    if (step < 1.0 / 64.0) {
      std::ostringstream os;
      os << "newtonSolve: no convergence (" << run.failure << "); residual history:";
      for (double h : run.history) os << ' ' << h;
      throw SolverError(os.str());
    }
  }
  PerturbedRR out = analyze(setup, psi);
  out.iterations = last.iterations;
  out.continuationSteps = steps;
  out.residualHistory = last.history;
  // Rows are equilibrated, so residuals below ~1e-12 are round-off.
  const double floor = 1e-12;
  for (std::size_t q = 0; q + 1 < last.history.size(); ++q)
    if (last.history[q + 1] > floor && last.history[q] > 0.0)
      out.quadraticRatios.push_back(last.history[q + 1] / (last.history[q] * last.history[q]));
  // Corrections are in psi units and do not depend on the row scaling; those
  // under stepTol sit on the round-off floor (~1e-12) and are left out.
  for (std::size_t q = 0; q + 1 < last.steps.size(); ++q)
    if (last.steps[q + 1] >= opt.stepTol && last.steps[q] > 0.0)
      out.stepRatios.push_back(last.steps[q + 1] / (last.steps[q] * last.steps[q]));
  if (!out.weakType || !out.transonic) {
    std::ostringstream os;
    os << "newtonSolve: reflected shock left the weak-type transonic regime (weak="
       << out.weakType << ", transonic=" << out.transonic << ")";
    throw RegimeError(os.str());
  }
  return out;
}

}  // namespace perturb
}  // namespace reflectlab
