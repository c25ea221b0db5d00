#pragma once

// Polytropic equation of state for self-similar potential flow.
//
//   p(rho)   = c0^2 rho0 / gamma * (rho / rho0)^gamma
//   c^2      = c0^2 (rho / rho0)^(gamma - 1)
//   pi(rho)  = c^2 / (gamma - 1)        (so dpi/drho = c^2 / rho, pi(0) = 0)
//
// The pseudo-potential chi = psi - |xi|^2 / 2 determines the density through
// Bernoulli's law with zero constant, rho = pi^{-1}(-chi - |grad chi|^2 / 2).

#include <cmath>
#include <sstream>

#include "reflectlab/core/dual.hpp"
#include "reflectlab/core/errors.hpp"
#include "reflectlab/core/vec2.hpp"

namespace reflectlab {

struct GasConstants {
  double gamma = 1.4;
  double rho0 = 1.0;
  double c0 = 1.0;

  void validate() const {
    if (!(gamma > 1.0) || !std::isfinite(gamma))
      throw DomainError("GasConstants: gamma must lie in (1, inf)");
    if (!(rho0 > 0.0)) throw DomainError("GasConstants: rho0 must be positive");
    if (!(c0 > 0.0)) throw DomainError("GasConstants: c0 must be positive");
  }
};

namespace gas {

template <class T>
T soundSpeed(const T& rho, const GasConstants& k) {
  using std::pow;
  if (!(value(rho) > 0.0)) {
    std::ostringstream os;
    os << "soundSpeed: nonpositive density " << value(rho);
    throw DomainError(os.str());
  }
  return k.c0 * pow(rho / k.rho0, 0.5 * (k.gamma - 1.0));
}

template <class T>
T soundSpeedSquared(const T& rho, const GasConstants& k) {
  using std::pow;
  if (!(value(rho) > 0.0)) throw DomainError("soundSpeedSquared: nonpositive density");
  return k.c0 * k.c0 * pow(rho / k.rho0, k.gamma - 1.0);
}

template <class T>
T piFn(const T& rho, const GasConstants& k) {
  return soundSpeedSquared(rho, k) / (k.gamma - 1.0);
}

template <class T>
T piInv(const T& w, const GasConstants& k) {
  using std::pow;
  if (!(value(w) > 0.0)) {
    std::ostringstream os;
    os << "piInv: argument " << value(w) << " is not positive (vacuum)";
    throw VacuumError(os.str());
  }
  return k.rho0 * pow(w * ((k.gamma - 1.0) / (k.c0 * k.c0)), 1.0 / (k.gamma - 1.0));
}

/// Density from the pseudo-potential value and its gradient (A = 0 Bernoulli law).
template <class T>
T densityFromChi(const T& chi, const Vec2<T>& gradChi, const GasConstants& k) {
  const T w = -chi - 0.5 * norm2(gradChi);
  if (!(value(w) > 0.0)) {
    std::ostringstream os;
    os << "densityFromChi: -chi - |grad chi|^2/2 = " << value(w) << " (vacuum)";
    throw VacuumError(os.str());
  }
  return piInv(w, k);
}

/// Density from the potential psi at the self-similar point xi.
template <class T>
T densityFromPsi(const T& psi, const Vec2<T>& gradPsi, const Vec2<T>& xi,
                 const GasConstants& k) {
  const T chi = psi - 0.5 * norm2(xi);
  return densityFromChi(chi, gradPsi - xi, k);
}

}  // namespace gas

/// Density, sound speed and velocity of a locally constant state.
struct ThermoState {
  double rho = 1.0;
  double c = 1.0;
  Vec2d velocity{};

  static ThermoState make(double rho, const Vec2d& velocity, const GasConstants& k) {
    return {rho, gas::soundSpeed(rho, k), velocity};
  }
  double mach() const { return norm(velocity) / c; }
};

}  // namespace reflectlab
