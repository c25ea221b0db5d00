#pragma once

// Shock relations of potential flow: mass flux and Bernoulli are conserved,
// the potential is continuous (hence the tangential pseudo-velocity is), and
// admissible shocks compress (z^n_u >= z^n_d).

#include <cmath>
#include <limits>
#include <sstream>
#include <string_view>

#include "reflectlab/core/errors.hpp"
#include "reflectlab/core/roots.hpp"
#include "reflectlab/core/vec2.hpp"
#include "reflectlab/gas.hpp"

namespace reflectlab {

enum class ShockType { weak, strong, critical };

inline std::string_view toString(ShockType t) {
  switch (t) {
    case ShockType::weak: return "weak";
    case ShockType::strong: return "strong";
    case ShockType::critical: return "critical";
  }
  return "?";
}
inline char typeLetter(ShockType t) {
  return t == ShockType::weak ? 'W' : (t == ShockType::strong ? 'S' : 'C');
}

/// Normal-direction result of the mass + Bernoulli closure.
struct NormalJump {
  double rhoD = 0.0;
  double vnD = 0.0;
  bool vanishing = false;  ///< upstream normal speed not supersonic; no jump
};

/// Pseudo-steady oblique shock. Velocities are flow velocities in the frame in
/// which `location` is measured, so z = v - location on either side.
struct ObliqueShock {
  ThermoState upstream;
  ThermoState downstream;
  Vec2d normal{1.0, 0.0};   ///< oriented so that znU > 0
  Vec2d tangent{0.0, 1.0};  ///< normal rotated 90 degrees counterclockwise
  double znU = 0.0;
  double znD = 0.0;
  double zt = 0.0;
  Vec2d location{};
  bool vanishing = false;

  Vec2d zU() const { return znU * normal + zt * tangent; }
  Vec2d zD() const { return znD * normal + zt * tangent; }
  /// Downstream pseudo-Mach number |z_d| / c_d.
  double downstreamPseudoMach() const { return norm(zD()) / downstream.c; }
  bool transonic() const { return downstreamPseudoMach() < 1.0; }
};

/// Constant upstream state described by its affine potential psi0 + v.xi.
struct UpstreamPotential {
  double psi0 = 0.0;
  Vec2d velocity{};

  template <class T>
  T psi(const Vec2<T>& xi) const {
    return psi0 + velocity.x * xi.x + velocity.y * xi.y;
  }
  double density(const GasConstants& k) const {
    return gas::piInv(-psi0 - 0.5 * norm2(velocity), k);
  }
  ThermoState state(const GasConstants& k) const {
    return ThermoState::make(density(k), velocity, k);
  }
};

namespace shock {

namespace detail {

// (pi(rho) - pi(rhoRef)) / (rho - rhoRef), evaluated without cancellation.
inline double piDividedDifference(double rho, double rhoRef, const GasConstants& k) {
  const double gm1 = k.gamma - 1.0;
  const double piRef = gas::piFn(rhoRef, k);
  const double delta = (rho - rhoRef) / rhoRef;
  if (delta == 0.0) return gas::soundSpeedSquared(rhoRef, k) / rhoRef;
  return piRef * std::expm1(gm1 * std::log1p(delta)) / (rho - rhoRef);
}

// Mass + Bernoulli residual with the trivial root rho = rhoRef divided out:
//   [pi(rho) + (m/rho)^2/2 - pi(rhoRef) - (m/rhoRef)^2/2] / (rho - rhoRef),
// where m = rhoRef * vnRef is the mass flux.
inline double reducedJumpResidual(double rho, double rhoRef, double vnRef,
                                  const GasConstants& k) {
  return piDividedDifference(rho, rhoRef, k) -
         0.5 * vnRef * vnRef * (rho + rhoRef) / (rho * rho);
}

inline double jumpResidual(double rho, double rhoRef, double vnRef, const GasConstants& k) {
  const double m = rhoRef * vnRef;
  return gas::piFn(rho, k) - gas::piFn(rhoRef, k) + 0.5 * (m / rho) * (m / rho) -
         0.5 * vnRef * vnRef;
}

inline double polishRoot(double rho, double rhoRef, double vnRef, const GasConstants& k) {
  const double m = rhoRef * vnRef;
  for (int it = 0; it < 3; ++it) {
    const double f = jumpResidual(rho, rhoRef, vnRef, k);
    const double vn = m / rho;
    const double df = (gas::soundSpeedSquared(rho, k) - vn * vn) / rho;
    if (df == 0.0) break;
    const double next = rho - f / df;
    if (!(std::abs(next - rho) < 1e-10 * rho)) break;
    rho = next;
  }
  return rho;
}

}  // namespace detail

/// Compressive root of rho_u vn_u = rho_d vn_d, pi(rho_d) + vn_d^2/2 = pi(rho_u) + vn_u^2/2.
/// Returns the vanishing jump when vnU does not exceed the upstream sound speed.
inline NormalJump downstreamFromNormalVelocity(double rhoU, double vnU, double /*vt*/,
                                               const GasConstants& k) {
  if (!(rhoU > 0.0)) throw DomainError("downstreamFromNormalVelocity: rhoU must be positive");
  const double cU = gas::soundSpeed(rhoU, k);
  if (!(vnU > cU)) return {rhoU, vnU, true};
  // Bernoulli stagnation bound: pi(rho) <= pi(rhoU) + vnU^2/2.
  const double rhoCap = gas::piInv(gas::piFn(rhoU, k) + 0.5 * vnU * vnU, k);
  auto h = [&](double rho) { return detail::reducedJumpResidual(rho, rhoU, vnU, k); };
  if (!(h(rhoCap) > 0.0) || !(h(rhoU) < 0.0))
    throw SolverError("downstreamFromNormalVelocity: no compressive root in (rhoU, rhoCap]");
  double rhoD = roots::bisect(h, rhoU, rhoCap, 4.0 * std::numeric_limits<double>::epsilon());
  rhoD = detail::polishRoot(rhoD, rhoU, vnU, k);
  return {rhoD, rhoU * vnU / rhoD, false};
}

/// Inverse closure: given a subsonic downstream normal speed, recover the
/// supersonic upstream state (rho_u < rho_d, vn_u > c_u).
inline NormalJump upstreamFromDownstreamNormal(double rhoD, double vnD, const GasConstants& k) {
  if (!(rhoD > 0.0) || !(vnD > 0.0))
    throw DomainError("upstreamFromDownstreamNormal: rhoD and vnD must be positive");
  const double cD = gas::soundSpeed(rhoD, k);
  if (!(vnD < cD)) return {rhoD, vnD, true};
  auto h = [&](double rho) { return detail::reducedJumpResidual(rho, rhoD, vnD, k); };
  // Below this density the kinetic term alone exceeds the total head.
  double lo = 0.5 * rhoD * vnD / std::sqrt(2.0 * gas::piFn(rhoD, k) + vnD * vnD);
  if (!(h(lo) < 0.0) || !(h(rhoD) > 0.0))
    throw SolverError("upstreamFromDownstreamNormal: expansive root not bracketed");
  double rhoU = roots::bisect(h, lo, rhoD, 4.0 * std::numeric_limits<double>::epsilon());
  rhoU = detail::polishRoot(rhoU, rhoD, vnD, k);
  return {rhoU, rhoD * vnD / rhoU, false};
}

/// Unit shock normal (vU - vD)/|vU - vD|.
inline Vec2d normalFromJump(const Vec2d& vU, const Vec2d& vD) {
  const Vec2d j = vU - vD;
  const double n = norm(j);
  if (!(n > 0.0)) throw DegenerateShockError("normalFromJump: zero velocity jump");
  return j / n;
}

/// Shock at `location` with prescribed upstream state and normal direction.
/// The normal is flipped if necessary so that znU > 0.
inline ObliqueShock fromUpstreamAndNormal(const ThermoState& up, Vec2d normal,
                                          const Vec2d& location, const GasConstants& k) {
  normal = normalized(normal);
  const Vec2d zU = up.velocity - location;
  if (dot(zU, normal) < 0.0) normal = -normal;
  ObliqueShock s;
  s.upstream = up;
  s.normal = normal;
  s.tangent = rotate90ccw(normal);
  s.location = location;
  s.znU = dot(zU, s.normal);
  s.zt = dot(zU, s.tangent);
  const NormalJump j = downstreamFromNormalVelocity(up.rho, s.znU, s.zt, k);
  s.znD = j.vnD;
  s.vanishing = j.vanishing;
  const Vec2d vD = up.velocity - (s.znU - s.znD) * s.normal;
  s.downstream = ThermoState::make(j.rhoD, vD, k);
  return s;
}

/// Shock from both side states; the normal comes from the velocity jump.
inline ObliqueShock fromStates(const ThermoState& up, const ThermoState& down,
                               const Vec2d& location) {
  ObliqueShock s;
  s.upstream = up;
  s.downstream = down;
  s.location = location;
  s.normal = normalFromJump(up.velocity, down.velocity);
  if (dot(up.velocity - location, s.normal) < 0.0) s.normal = -s.normal;
  s.tangent = rotate90ccw(s.normal);
  s.znU = dot(up.velocity - location, s.normal);
  s.znD = dot(down.velocity - location, s.normal);
  s.zt = dot(up.velocity - location, s.tangent);
  return s;
}

/// Largest relative violation among |n| = 1, tangential continuity, mass flux and
/// admissibility (the latter reported as max(0, znD - znU) / znU).
inline double invariantViolation(const ObliqueShock& s) {
  double v = std::abs(norm(s.normal) - 1.0);
  const double ztD = dot(s.downstream.velocity - s.location, s.tangent);
  v = std::max(v, std::abs(ztD - s.zt) / std::max(1.0, std::abs(s.zt)));
  const double fluxU = s.upstream.rho * s.znU;
  const double fluxD = s.downstream.rho * s.znD;
  v = std::max(v, std::abs(fluxU - fluxD) / std::abs(fluxU));
  v = std::max(v, std::max(0.0, s.znD - s.znU) / s.znU);
  return v;
}

/// Shock-condition residual g(grad psi, psi, xi) for downstream potential data
/// against a constant upstream state. Vanishes iff rho z^n is continuous.
template <class T>
T gResidual(const Vec2<T>& gradPsi, const T& psi, const Vec2<T>& xi,
            const UpstreamPotential& up, const GasConstants& k) {
  const Vec2<T> vI(T(up.velocity.x), T(up.velocity.y));
  const Vec2<T> jump = vI - gradPsi;
  const T jn = norm(jump);
  if (!(value(jn) > 0.0))
    throw DegenerateShockError("gResidual: grad psi equals the upstream velocity");
  const T rho = gas::densityFromPsi(psi, gradPsi, xi, k);
  const double rhoI = up.density(k);
  const Vec2<T> z = gradPsi - xi;
  const Vec2<T> zI = vI - xi;
  return dot(rho * z - T(rhoI) * zI, jump / jn);
}

/// Normal to the shock polar in velocity space, with the positive scale that
/// makes it the exact derivative of gResidual with respect to grad psi on a
/// shock: rho_d [(1 - (znD/c)^2) n - zt (1/znU + znD/c^2) t].
inline Vec2d gGradientV(const ObliqueShock& s, const GasConstants& /*k*/) {
  if (s.znU == 0.0) throw DomainError("gGradientV: znU = 0 (not a shock)");
  const double c = s.downstream.c;
  const double mn = s.znD / c;
  return s.downstream.rho *
         ((1.0 - mn * mn) * s.normal - s.zt * (1.0 / s.znU + s.znD / (c * c)) * s.tangent);
}

/// Weak iff g_v . z_d < 0, strong iff > 0, critical within the relative tolerance.
inline ShockType classifyType(const ObliqueShock& s, const GasConstants& k,
                              double tol = 1e-10) {
  const Vec2d gv = gGradientV(s, k);
  const Vec2d zd = s.zD();
  const double p = dot(gv, zd);
  if (std::abs(p) < tol * norm(gv) * norm(zd)) return ShockType::critical;
  return p < 0.0 ? ShockType::weak : ShockType::strong;
}

}  // namespace shock
}  // namespace reflectlab
