#pragma once

// Regular reflection: local configuration at the reflection point, the global
// trivial RR, the map between core data and (M1, alpha, theta), and the
// detachment / sonic transition curves.
//
// Geometry (lab frame): corner at the origin, wall A along polar angle 180
// degrees, wall B along polar angle theta in (90, 180) degrees. The reflected
// shock S of the trivial RR is the vertical segment xi = xiA from (xiA, 0) to
// xiB = (xiA, xiA tan theta). Sector 3 (the triangle Omega) is at rest.
//
// Parameter conventions: M1 is measured in the frame of the reflection point,
// the incident shock is the line through xiB at polar angle 180 - alpha, and
// alpha is reduced to [0, 180) degrees.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <exception>
#include <vector>

#include "reflectlab/core/errors.hpp"
#include "reflectlab/core/parallel.hpp"
#include "reflectlab/core/roots.hpp"
#include "reflectlab/core/vec2.hpp"
#include "reflectlab/gas.hpp"
#include "reflectlab/polar.hpp"
#include "reflectlab/shock.hpp"

namespace reflectlab {

struct ReflectionParams {
  double M1 = 0.0;
  double alpha = 0.0;  ///< radians
  double theta = 0.0;  ///< radians
  double gamma = 1.4;
};

struct TrivialRR {
  GasConstants gas;
  double theta = 0.0;
  double xiA = 0.0;
  Vec2d xiB{};
  double psi0 = 0.0;       ///< constant potential in Omega
  ThermoState sector1;     ///< lab-frame states
  ThermoState sector2;
  ThermoState sector3;
  UpstreamPotential upstream2;  ///< psi^I in sector 2
  UpstreamPotential upstream1;
  ObliqueShock reflected;  ///< at xiB, lab frame
  ObliqueShock incident;   ///< at xiB, lab frame
  ShockType reflectedType = ShockType::weak;
  double pseudoMachB = 0.0;  ///< max over Omega of |xi| / c3 (attained at xiB)
  double M2 = 0.0;           ///< sector-2 Mach number in the reflection-point frame
  ReflectionParams params;

  Vec2d wallBDir() const { return unitVector(theta); }
  /// Outward normal of Omega on wall A.
  static Vec2d normalA() { return {0.0, -1.0}; }
  /// Outward normal of Omega on wall B.
  Vec2d normalB() const { return {std::sin(theta), -std::cos(theta)}; }
  double rho3() const { return sector3.rho; }
  double c3() const { return sector3.c; }
  /// Reflected shock at the point (xiA, eta) of S.
  ObliqueShock reflectedAt(double eta) const {
    return shock::fromStates(sector2, sector3, {xiA, eta});
  }
  bool weakType() const { return reflectedType == ShockType::weak; }
  bool transonic() const { return pseudoMachB < 1.0; }
};

/// Local reflection at the reflection point for given (M1, alpha, theta).
/// Velocities z are measured in the frame of the reflection point; the lab
/// quantities (rB, xiB, v2, psiI0) place the reflection point so that the
/// sector-2 flow is parallel to wall A.
struct LocalConfiguration {
  ReflectionParams params;
  double rho1 = 0.0;
  Vec2d z1{};
  ObliqueShock incident;  ///< located at the reflection point (origin of this frame)
  double rho2 = 0.0;
  Vec2d z2{};
  double M2 = 0.0;
  double tau = 0.0;  ///< angle the reflected shock must turn z2 to align with wall B
  double rB = 0.0;
  Vec2d xiB{};
  Vec2d v2{};
  double psiI0 = 0.0;

  UpstreamPotential sector2() const { return {psiI0, v2}; }
};

struct TransitionPoint {
  double M1 = 0.0;
  double thetaD = NAN;  ///< radians
  double thetaS = NAN;
  std::string status = "ok";
};

namespace reflection {

inline double wrapPi(double a) {
  a = std::fmod(a, M_PI);
  if (a < 0.0) a += M_PI;
  return a;
}

/// Both reflected-shock candidates for a deflection tau of a Mach M2 flow.
struct LocalRR {
  DeflectionRoots roots;
  bool weakTransonic = false;
  bool strongTransonic = false;
};

inline LocalRR localRR(double M2, double tau, const GasConstants& k) {
  LocalRR r;
  r.roots = polar::deflectionSolve(M2, tau, k);
  r.weakTransonic = r.roots.weak.downstream.mach() < 1.0;
  r.strongTransonic = r.roots.strong.downstream.mach() < 1.0;
  return r;
}

/// Forward map (M1, alpha, theta) -> local configuration. rho1 fixes the scale.
inline LocalConfiguration localConfiguration(const ReflectionParams& p, double rho1,
                                             const GasConstants& k) {
  if (!(p.M1 > 1.0)) throw DomainError("localConfiguration: M1 must exceed 1");
  LocalConfiguration lc;
  lc.params = p;
  lc.rho1 = rho1;
  const double c1 = gas::soundSpeed(rho1, k);
  const Vec2d eB = unitVector(p.theta);
  lc.z1 = -p.M1 * c1 * eB;
  const Vec2d lineDir = unitVector(M_PI - p.alpha);
  const Vec2d nI = rotate90ccw(lineDir);
  const ThermoState s1{rho1, c1, lc.z1};
  lc.incident = shock::fromUpstreamAndNormal(s1, nI, {0.0, 0.0}, k);
  if (lc.incident.vanishing)
    throw RegimeError("localConfiguration: incident normal Mach number does not exceed 1");
  lc.rho2 = lc.incident.downstream.rho;
  lc.z2 = lc.incident.downstream.velocity;
  lc.M2 = norm(lc.z2) / lc.incident.downstream.c;
  lc.tau = std::acos(std::clamp(std::abs(dot(lc.z2, eB)) / norm(lc.z2), 0.0, 1.0));
  // Lab frame: v2 = z2 + rB eB must be horizontal.
  lc.rB = -lc.z2.y / std::sin(p.theta);
  lc.xiB = lc.rB * eB;
  lc.v2 = lc.z2 + lc.xiB;
  lc.v2.y = 0.0;
  lc.psiI0 = -gas::piFn(lc.rho2, k) - 0.5 * norm2(lc.v2);
  return lc;
}

namespace detail {

// Attaches the incident shock at xiB: finds the sector-1 speed q (reflection
// point frame, flow along -eB) so that sector 2 is the downstream state.
inline ObliqueShock attachIncident(const ThermoState& s2, const Vec2d& xiB, double theta,
                                   const GasConstants& k, double& qOut) {
  const Vec2d z2 = s2.velocity - xiB;
  const Vec2d eB = unitVector(theta);
  const double head = gas::piFn(s2.rho, k) + 0.5 * norm2(z2);
  auto rho1Of = [&](double q) { return gas::piInv(head - 0.5 * q * q, k); };
  auto residual = [&](double q) {
    const Vec2d z1 = -q * eB;
    const Vec2d n = normalized(z1 - z2);
    return rho1Of(q) * dot(z1, n) - s2.rho * dot(z2, n);
  };
  const double qLo = norm(z2), qHi = std::sqrt(2.0 * head);
  const int nScan = 2000;
  std::vector<double> found;
  double prevQ = qLo + 1e-9 * (qHi - qLo);
  double prevR = residual(prevQ);
  for (int i = 1; i < nScan; ++i) {
    const double q = qLo + (qHi - qLo) * i / nScan;
    const double r = residual(q);
    if (std::isfinite(prevR) && std::isfinite(r) && (prevR < 0.0) != (r < 0.0)) {
      const double root = roots::bisect(residual, prevQ, q, 1e-16);
      const Vec2d z1 = -root * eB;
      const Vec2d n = normalized(z1 - z2);
      if (dot(z2, n) > 0.0 && dot(z1, n) > dot(z2, n)) found.push_back(root);
    }
    prevQ = q;
    prevR = r;
  }
  if (found.size() != 1) {
    std::ostringstream os;
    os << "attachIncident: expected one admissible incident shock, found " << found.size();
    throw RegimeError(os.str());
  }
  qOut = found.front();
  const ThermoState s1 = ThermoState::make(rho1Of(qOut), -qOut * eB + xiB, k);
  return shock::fromStates(s1, s2, xiB);
}

}  // namespace detail

/// Global trivial RR from the state in Omega (rho3), the shock position xiA and
/// the wall angle theta.
inline TrivialRR trivialRRFromCore(double rho3, double xiA, double theta, const GasConstants& k) {
  k.validate();
  if (!(rho3 > 0.0)) throw DomainError("trivialRRFromCore: rho3 must be positive");
  if (!(xiA < 0.0)) throw DomainError("trivialRRFromCore: xiA must be negative");
  if (!(theta > 0.5 * M_PI && theta < M_PI))
    throw DomainError("trivialRRFromCore: theta must lie in (90, 180) degrees");
  TrivialRR t;
  t.gas = k;
  t.theta = theta;
  t.xiA = xiA;
  t.xiB = {xiA, xiA * std::tan(theta)};
  t.sector3 = ThermoState::make(rho3, {0.0, 0.0}, k);
  t.psi0 = -gas::piFn(rho3, k);
  t.pseudoMachB = norm(t.xiB) / t.sector3.c;
  if (!(t.pseudoMachB < 1.0)) {
    std::ostringstream os;
    os << "trivialRRFromCore: Omega not elliptic, |xiB|/c3 = " << t.pseudoMachB;
    throw RegimeError(os.str());
  }
  // Sector 2 from the inverse normal-shock closure: downstream (rho3, zn = -xiA).
  const NormalJump up = shock::upstreamFromDownstreamNormal(rho3, -xiA, k);
  if (up.vanishing) throw RegimeError("trivialRRFromCore: no admissible sector-2 state");
  const double vx = up.vnD + xiA;
  t.sector2 = ThermoState::make(up.rhoD, {vx, 0.0}, k);
  t.upstream2 = {t.psi0 - vx * xiA, {vx, 0.0}};
  t.reflected = shock::fromStates(t.sector2, t.sector3, t.xiB);
  t.reflectedType = shock::classifyType(t.reflected, k);

  const Vec2d z2 = t.sector2.velocity - t.xiB;
  t.M2 = norm(z2) / t.sector2.c;
  if (!(t.M2 > 1.0)) throw RegimeError("trivialRRFromCore: sector-2 flow not supersonic at xiB");
  double q = 0.0;
  t.incident = detail::attachIncident(t.sector2, t.xiB, theta, k, q);
  t.sector1 = t.incident.upstream;
  t.upstream1 = {-gas::piFn(t.sector1.rho, k) - 0.5 * norm2(t.sector1.velocity),
                 t.sector1.velocity};
  t.params.M1 = q / t.sector1.c;
  t.params.alpha = wrapPi(M_PI - polarAngle(t.incident.tangent));
  t.params.theta = theta;
  t.params.gamma = k.gamma;
  return t;
}

inline ReflectionParams paramsFromCore(const TrivialRR& t) { return t.params; }

struct CoreGuess {
  double rho3 = 1.0;
  std::optional<double> xiA;
};

namespace detail {

inline TrivialRR coreNewton(const ReflectionParams& p, const GasConstants& k, const CoreGuess& guess,
                            double x, int maxIter, double tol) {
  double th = p.theta;
  auto eval = [&](double xa, double tt, double out[2]) {
    const ReflectionParams q = trivialRRFromCore(guess.rho3, xa, tt, k).params;
    out[0] = (q.M1 - p.M1) / p.M1;
    out[1] = q.alpha - p.alpha;
  };
  double r[2];
  eval(x, th, r);
  double rn = std::hypot(r[0], r[1]);
  for (int it = 0; it < maxIter && rn > tol; ++it) {
    const double hx = 1e-7 * std::max(1.0, std::abs(x)), ht = 1e-7;
    double rx[2], rt[2];
    eval(x + hx, th, rx);
    eval(x, th + ht, rt);
    const Mat2 J{(rx[0] - r[0]) / hx, (rt[0] - r[0]) / ht, (rx[1] - r[1]) / hx,
                 (rt[1] - r[1]) / ht};
    if (!std::isfinite(J.det()) || J.det() == 0.0)
      throw SolverError("coreFromParams: singular Jacobian");
    const Vec2d step = J.inverse() * Vec2d{-r[0], -r[1]};
    double lam = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
      try {
        double rr[2];
        eval(x + lam * step.x, th + lam * step.y, rr);
        const double nn = std::hypot(rr[0], rr[1]);
        if (nn < rn || nn <= tol) {
          x += lam * step.x;
          th += lam * step.y;
          r[0] = rr[0];
          r[1] = rr[1];
          rn = nn;
          accepted = true;
          break;
        }
      } catch (const DomainError&) {
      }
    }
    if (!accepted) break;
  }
  if (!(rn <= tol)) {
    std::ostringstream os;
    os << "coreFromParams: Newton did not converge, last residual " << rn;
    throw SolverError(os.str());
  }
  if (std::abs(th - p.theta) > 1e-8) {
    std::ostringstream os;
    os << "coreFromParams: (M1, alpha) correspond to a trivial RR at theta = "
       << th * 180.0 / M_PI << " deg, not the requested " << p.theta * 180.0 / M_PI;
    throw RegimeError(os.str());
  }
  return trivialRRFromCore(guess.rho3, x, th, k);
}

}  // namespace detail

/// Inverse map. The (rho3, xiA) -> (M1, alpha) map is singular because of the
/// scaling invariance of the equations, so rho3 is held fixed (a gauge) and the
/// 2x2 root problem is posed in (xiA, theta). The recovered theta must agree
/// with params.theta, otherwise the parameters are not on the trivial-RR family.
/// Newton is started from a few xiA inside the ellipticity limit
/// |xiA| < c3 |cos theta|; the first converged start wins.
inline TrivialRR coreFromParams(const ReflectionParams& p, const GasConstants& k,
                                CoreGuess guess = {}, int maxIter = 100, double tol = 1e-12) {
  const double limit = gas::soundSpeed(guess.rho3, k) * std::abs(std::cos(p.theta));
  std::vector<double> starts;
  if (guess.xiA) starts.push_back(*guess.xiA);
  for (double f : {0.7, 0.5, 0.85, 0.3, 0.95, 0.15}) starts.push_back(-f * limit);
  std::exception_ptr last;
  for (double x0 : starts) {
    try {
      return detail::coreNewton(p, k, guess, x0, maxIter, tol);
    } catch (const Error&) {
      last = std::current_exception();
    }
  }
  std::rethrow_exception(last);
}

/// Status of a local RR at (M1, alpha, theta): whether the reflected shock is
/// detached (tau > tau*(M2) or M2 <= 1) and whether the weak reflected shock
/// is transonic (tau > tau_s(M2)).
struct LocalStatus {
  bool valid = false;  ///< incident shock exists
  double M2 = 0.0;
  double tau = 0.0;
  double tauStar = 0.0;
  double tauS = 0.0;
  bool detached = true;
  bool weakTransonic = true;
};

inline LocalStatus localStatus(const ReflectionParams& p, const GasConstants& k) {
  LocalStatus s;
  LocalConfiguration lc;
  try {
    lc = localConfiguration(p, k.rho0, k);
  } catch (const DomainError&) {
    return s;
  }
  s.valid = true;
  s.M2 = lc.M2;
  s.tau = lc.tau;
  if (!(lc.M2 > 1.0)) return s;
  s.tauStar = polar::criticalAngle(lc.M2, k).tauStar;
  s.tauS = polar::sonicAngle(lc.M2, k).tauS;
  s.detached = lc.tau >= s.tauStar;
  s.weakTransonic = lc.tau >= s.tauS;
  return s;
}

/// Upper end of the theta range where the incident shock exists.
inline double thetaUpper(double M1, double alpha) {
  // Incident normal Mach number M1 |sin(theta + alpha - pi)| must exceed 1.
  return M_PI - alpha - std::asin(1.0 / M1);
}

/// theta_d and theta_s for each M1: the largest theta below which the local RR
/// detaches (resp. the weak reflected shock becomes transonic). Scans theta
/// downward from the incident-shock limit, then bisects to 1e-8 degrees.
inline std::vector<TransitionPoint> transitionCurves(double gamma, double alpha,
                                                     const std::vector<double>& M1grid,
                                                     double scanStepDeg = 0.25,
                                                     double tolDeg = 1e-8) {
  GasConstants k;
  k.gamma = gamma;
  k.validate();
  std::vector<TransitionPoint> out(M1grid.size());
  parallelFor(M1grid.size(), [&](std::size_t i) {
    const double M1 = M1grid[i];
    TransitionPoint& tp = out[i];
    tp.M1 = M1;
    if (!(M1 > 1.0)) {
      tp.status = "invalid_M1";
      return;
    }
    const double lo = 0.5 * M_PI + 1e-9;
    const double hi = std::min(thetaUpper(M1, alpha), M_PI) - 1e-9;
    auto statusAt = [&](double th) { return localStatus({M1, alpha, th, gamma}, k); };
    auto findEdge = [&](auto pred) -> double {
      const double step = scanStepDeg * M_PI / 180.0;
      double prev = hi;
      if (pred(statusAt(prev))) return NAN;
      for (double th = hi - step;; th -= step) {
        th = std::max(th, lo);
        if (pred(statusAt(th))) {
          double a = th, b = prev;  // pred(a) true, pred(b) false
          while ((b - a) * 180.0 / M_PI > tolDeg) {
            const double m = 0.5 * (a + b);
            if (pred(statusAt(m))) a = m; else b = m;
          }
          return 0.5 * (a + b);
        }
        if (th <= lo) return NAN;
        prev = th;
      }
    };
    tp.thetaD = findEdge([](const LocalStatus& s) { return !s.valid || s.detached; });
    tp.thetaS = findEdge([](const LocalStatus& s) {
      return !s.valid || s.detached || s.weakTransonic;
    });
    if (std::isnan(tp.thetaD) || std::isnan(tp.thetaS)) tp.status = "out_of_regime";
  });
  return out;
}

}  // namespace reflection
}  // namespace reflectlab
