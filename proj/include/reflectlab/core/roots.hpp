#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include "reflectlab/core/errors.hpp"

namespace reflectlab::roots {

struct Bracket {
  double lo;
  double hi;
};

/// Bisection on a sign change; returns the midpoint once the bracket is
/// narrower than xtol or f vanishes exactly.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-15, int maxIter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    std::ostringstream os;
    os << "bisect: root not bracketed on [" << lo << ", " << hi << "] (f=" << flo
       << ", " << fhi << ")";
    throw SolverError(os.str());
  }
  for (int it = 0; it < maxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= xtol * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

/// Newton iteration kept inside [lo, hi]; falls back to bisection whenever a
/// step leaves the bracket or fails to shrink the residual enough.
template <class F, class DF>
double safeguardedNewton(F&& f, DF&& df, double lo, double hi, double x0,
                         double ftol = 1e-14, int maxIter = 200) {
  double flo = f(lo);
  const double fhi = f(hi);
  if ((flo < 0.0) == (fhi < 0.0) && flo != 0.0 && fhi != 0.0)
    throw SolverError("safeguardedNewton: root not bracketed");
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < maxIter; ++it) {
    const double fx = f(x);
    if (std::abs(fx) <= ftol) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x))
      return next;
    x = next;
  }
  return x;
}

/// Golden-section search for the maximizer of a unimodal function.
template <class F>
double goldenMax(F&& f, double lo, double hi, double xtol = 1e-13, int maxIter = 300) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < maxIter && (b - a) > xtol; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Scan [lo, hi] in n steps and return the first subinterval with a sign change.
template <class F>
std::pair<bool, Bracket> scanForSignChange(F&& f, double lo, double hi, int n) {
  double xprev = lo;
  double fprev = f(lo);
  for (int k = 1; k <= n; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / n;
    const double fx = f(x);
    if (std::isfinite(fprev) && std::isfinite(fx) && ((fprev < 0.0) != (fx < 0.0)))
      return {true, {xprev, x}};
    xprev = x;
    fprev = fx;
  }
  return {false, {lo, hi}};
}

}  // namespace reflectlab::roots
