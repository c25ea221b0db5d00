#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's root finders.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace oracle {

/// pi(rho) = c0^2 / (gamma - 1) (rho / rho0)^(gamma - 1), long double.
inline long double piL(long double rho, long double gamma) {
  return std::pow(rho, gamma - 1.0L) / (gamma - 1.0L);
}

/// Compressive root of the normal-shock relations
///   rhoU vn = rhoD vnD,  pi(rhoD) + vnD^2 / 2 = pi(rhoU) + vn^2 / 2
/// (rho0 = c0 = 1) by plain bisection in long double on the density ratio r.
/// The trivial root r = 1 is divided out:
///   h(r) = [pi(r rhoU) - pi(rhoU)] / (r - 1) - vn^2 (r + 1) / (2 r^2),
/// with h(1) = rhoU pi'(rhoU) - vn^2 = c^2 - vn^2 < 0 for a supersonic vn.
inline std::pair<long double, long double> normalShock(long double rhoU, long double vn,
                                                       long double gamma) {
  auto h = [&](long double r) {
    const long double dpi = r == 1.0L ? std::pow(rhoU, gamma - 1.0L)
                                      : (piL(r * rhoU, gamma) - piL(rhoU, gamma)) / (r - 1.0L);
    return dpi - 0.5L * vn * vn * (r + 1.0L) / (r * r);
  };
  long double lo = 1.0L, hi = 2.0L;
  while (h(hi) < 0.0L) hi *= 2.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    (h(mid) < 0.0L ? lo : hi) = mid;
  }
  const long double r = 0.5L * (lo + hi);
  return {r * rhoU, vn / r};
}

/// Seeded generator with a few helpers; every property test uses its own seed.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
};

}  // namespace oracle
