#pragma once

// Steady shock polar for the upstream velocity (M_u c_u, 0).
//
// Sign conventions: the normal is n = (cos b, sin b) and t = rotate90ccw(n), so
// the upstream tangential component is -M_u c_u sin b. A positive b turns the
// flow clockwise (tau < 0). The polar is symmetric, tau(-b) = -tau(b), and
// everything below is phrased in terms of |b| and |tau|; angles returned as
// "betaStar", "betaS" are magnitudes, with tau(-betaStar) = +tauStar.

#include <cmath>
#include <vector>

#include "reflectlab/core/errors.hpp"
#include "reflectlab/core/parallel.hpp"
#include "reflectlab/core/roots.hpp"
#include "reflectlab/core/vec2.hpp"
#include "reflectlab/gas.hpp"
#include "reflectlab/shock.hpp"

namespace reflectlab {

struct PolarSample {
  double beta = 0.0;
  double tau = 0.0;
  Vec2d vD{};
  double rhoD = 0.0;
  double cD = 0.0;
  double MD = 0.0;
  ShockType type = ShockType::weak;
};

struct PolarCurve {
  double Mu = 0.0;
  ThermoState upstream;
  double betaMax = 0.0;
  std::vector<PolarSample> samples;  ///< ordered by increasing beta
};

struct CriticalAngle {
  double tauStar = 0.0;
  double betaStar = 0.0;
};

struct SonicAngle {
  double tauS = 0.0;
  double betaS = 0.0;
};

/// The two reflected-shock candidates for one deflection.
struct DeflectionRoots {
  double tau = 0.0;
  double betaWeak = 0.0;
  double betaStrong = 0.0;
  ObliqueShock weak;
  ObliqueShock strong;
  bool critical = false;  ///< |tau| = tau*: both roots coincide
};

namespace polar {

inline void requireSupersonic(double Mu) {
  if (!(Mu > 1.0) || !std::isfinite(Mu)) throw DomainError("polar: upstream Mach must exceed 1");
}

inline double betaMax(double Mu) {
  requireSupersonic(Mu);
  return std::acos(1.0 / Mu);
}

inline ThermoState upstreamState(double Mu, const GasConstants& k) {
  const double c = gas::soundSpeed(k.rho0, k);
  return {k.rho0, c, {Mu * c, 0.0}};
}

/// Steady shock (located at the origin) with normal angle beta.
inline ObliqueShock polarShock(double Mu, double beta, const GasConstants& k) {
  const double bmax = betaMax(Mu);
  if (!(std::abs(beta) <= bmax))
    throw DomainError("polarShock: |beta| >= arccos(1/Mu), upstream normal speed subsonic");
  const ThermoState up = upstreamState(Mu, k);
  const Vec2d n{std::cos(beta), std::sin(beta)};
  ObliqueShock s;
  s.upstream = up;
  s.normal = n;
  s.tangent = rotate90ccw(n);
  s.znU = dot(up.velocity, n);
  s.zt = dot(up.velocity, s.tangent);
  const NormalJump j = shock::downstreamFromNormalVelocity(up.rho, s.znU, s.zt, k);
  s.znD = j.vnD;
  s.vanishing = j.vanishing;
  s.downstream = ThermoState::make(j.rhoD, s.znD * n + s.zt * s.tangent, k);
  return s;
}

/// Counterclockwise angle from v_u to v_d.
inline double deflection(const ObliqueShock& s) {
  const Vec2d& u = s.upstream.velocity;
  const Vec2d& d = s.downstream.velocity;
  return std::atan2(cross(u, d), dot(u, d));
}

inline PolarSample polarPoint(double Mu, double beta, const GasConstants& k) {
  const ObliqueShock s = polarShock(Mu, beta, k);
  PolarSample p;
  p.beta = beta;
  p.tau = deflection(s);
  p.vD = s.downstream.velocity;
  p.rhoD = s.downstream.rho;
  p.cD = s.downstream.c;
  p.MD = s.downstream.mach();
  p.type = shock::classifyType(s, k);
  return p;
}

/// |tau| as a function of |beta|.
inline double absDeflection(double Mu, double absBeta, const GasConstants& k) {
  return -deflection(polarShock(Mu, absBeta, k));
}

inline double downstreamMach(double Mu, double beta, const GasConstants& k) {
  return polarShock(Mu, beta, k).downstream.mach();
}

/// Maximum deflection; golden-section search in |beta|.
inline CriticalAngle criticalAngle(double Mu, const GasConstants& k) {
  const double bmax = betaMax(Mu);
  const double b = roots::goldenMax([&](double x) { return absDeflection(Mu, x, k); }, 0.0, bmax,
                                    1e-12 * bmax);
  return {absDeflection(Mu, b, k), b};
}

/// Deflection at which the weak-branch downstream flow is sonic.
inline SonicAngle sonicAngle(double Mu, const GasConstants& k) {
  const double bmax = betaMax(Mu);
  const CriticalAngle crit = criticalAngle(Mu, k);
  auto f = [&](double b) { return downstreamMach(Mu, b, k) - 1.0; };
  const double fStar = f(crit.betaStar);
  if (!(fStar < 0.0))
    throw SolverError("sonicAngle: downstream flow at the critical point is not subsonic");
  // At bmax the shock vanishes and M_d = Mu > 1.
  const double b = roots::bisect(f, crit.betaStar, bmax, 1e-15);
  return {absDeflection(Mu, b, k), b};
}

/// Weak and strong roots of tau(beta) = tau. The weak root lies on
/// |beta| in [betaStar, betaMax], the strong one on [0, betaStar].
inline DeflectionRoots deflectionSolve(double Mu, double tau, const GasConstants& k,
                                       const CriticalAngle* known = nullptr) {
  const double bmax = betaMax(Mu);
  const CriticalAngle crit = known ? *known : criticalAngle(Mu, k);
  const double target = std::abs(tau);
  const double sign = tau >= 0.0 ? -1.0 : 1.0;  // beta sign producing this tau
  DeflectionRoots r;
  r.tau = tau;
  if (target > crit.tauStar * (1.0 + 1e-13) + 1e-15)
    throw RegimeError("deflectionSolve: |tau| exceeds tau*; local regular reflection impossible");
  auto f = [&](double b) { return absDeflection(Mu, b, k) - target; };
  double bStrong, bWeak;
  if (!(f(crit.betaStar) > 0.0)) {
    bStrong = bWeak = crit.betaStar;
    r.critical = true;
  } else {
    bStrong = target == 0.0 ? 0.0 : roots::bisect(f, 0.0, crit.betaStar, 1e-16);
    bWeak = target == 0.0 ? bmax : roots::bisect(f, crit.betaStar, bmax, 1e-16);
  }
  r.betaStrong = sign * bStrong;
  r.betaWeak = sign * bWeak;
  r.strong = polarShock(Mu, r.betaStrong, k);
  r.weak = polarShock(Mu, r.betaWeak, k);
  return r;
}

/// A = v^t (1/v^n_u + M^n_d / c_d) / (1 - (M^n_d)^2).
inline double convexityA(double Mu, double beta, const GasConstants& k) {
  const ObliqueShock s = polarShock(Mu, beta, k);
  const double mnd = s.znD / s.downstream.c;
  return s.zt * (1.0 / s.znU + mnd / s.downstream.c) / (1.0 - mnd * mnd);
}

/// Central-difference derivative of A with a step kept inside the polar.
inline double convexityADerivative(double Mu, double beta, const GasConstants& k) {
  const double bmax = betaMax(Mu);
  const double h = std::min(1e-6 * bmax, 0.25 * (bmax - std::abs(beta)));
  return (convexityA(Mu, beta + h, k) - convexityA(Mu, beta - h, k)) / (2.0 * h);
}

/// q x d(q)/d(beta) = 1 - dA/dbeta + A^2 for q = n - A t.
inline double convexityCertificate(double Mu, double beta, const GasConstants& k) {
  const double a = convexityA(Mu, beta, k);
  return 1.0 - convexityADerivative(Mu, beta, k) + a * a;
}

/// Chebyshev-clustered sweep over the open interval (-betaMax, betaMax).
inline PolarCurve sweep(double Mu, int n, const GasConstants& k) {
  if (n < 2) throw DomainError("polar sweep: need at least 2 samples");
  PolarCurve c;
  c.Mu = Mu;
  c.upstream = upstreamState(Mu, k);
  c.betaMax = betaMax(Mu);
  c.samples.resize(static_cast<std::size_t>(n));
  parallelFor(static_cast<std::size_t>(n), [&](std::size_t i) {
    const double x = -std::cos(M_PI * (static_cast<double>(i) + 0.5) / n);
    c.samples[i] = polarPoint(Mu, c.betaMax * x, k);
  });
  return c;
}

/// Minimum of the convexity certificate over the samples of a curve.
inline double convexityScan(const PolarCurve& curve, const GasConstants& k) {
  std::vector<double> cert(curve.samples.size());
  parallelFor(cert.size(), [&](std::size_t i) {
    cert[i] = convexityCertificate(curve.Mu, curve.samples[i].beta, k);
  });
  double m = INFINITY;
  for (double v : cert) m = std::min(m, v);
  return m;
}

}  // namespace polar
}  // namespace reflectlab
