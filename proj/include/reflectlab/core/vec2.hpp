#pragma once

#include <cmath>
#include <ostream>
#include <type_traits>

#include "reflectlab/core/dual.hpp"

namespace reflectlab {

template <class T>
struct Vec2 {
  T x{};
  T y{};

  constexpr Vec2() = default;
  constexpr Vec2(T x_, T y_) : x(x_), y(y_) {}
  template <class U>
  constexpr explicit Vec2(const Vec2<U>& o) : x(o.x), y(o.y) {}

  constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(const T& s) { x *= s; y *= s; return *this; }
  constexpr Vec2& operator/=(const T& s) { x /= s; y /= s; return *this; }
};

using Vec2d = Vec2<double>;

template <class T> constexpr Vec2<T> operator+(Vec2<T> a, const Vec2<T>& b) { return a += b; }
template <class T> constexpr Vec2<T> operator-(Vec2<T> a, const Vec2<T>& b) { return a -= b; }
template <class T> constexpr Vec2<T> operator-(const Vec2<T>& a) { return {-a.x, -a.y}; }
template <class T> constexpr Vec2<T> operator*(Vec2<T> a, const std::type_identity_t<T>& s) { return a *= s; }
template <class T> constexpr Vec2<T> operator*(const std::type_identity_t<T>& s, Vec2<T> a) { return a *= s; }
template <class T> constexpr Vec2<T> operator/(Vec2<T> a, const std::type_identity_t<T>& s) { return a /= s; }

template <class T> constexpr T dot(const Vec2<T>& a, const Vec2<T>& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the planar cross product.
template <class T> constexpr T cross(const Vec2<T>& a, const Vec2<T>& b) { return a.x * b.y - a.y * b.x; }
template <class T> constexpr T norm2(const Vec2<T>& a) { return dot(a, a); }
template <class T> T norm(const Vec2<T>& a) {
  using std::sqrt;
  return sqrt(norm2(a));
}
template <class T> Vec2<T> normalized(const Vec2<T>& a) { return a / norm(a); }
template <class T> constexpr Vec2<T> rotate90ccw(const Vec2<T>& a) { return {-a.y, a.x}; }
template <class T> constexpr Vec2<T> rotate90cw(const Vec2<T>& a) { return {a.y, -a.x}; }

inline Vec2d rotate(const Vec2d& a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline Vec2d unitVector(double angle) { return {std::cos(angle), std::sin(angle)}; }
/// Polar angle in [0, 2pi).
inline double polarAngle(const Vec2d& a) {
  double t = std::atan2(a.y, a.x);
  if (t < 0.0) t += 2.0 * M_PI;
  return t;
}

inline Vec2d value(const Vec2<Dual>& a) { return {a.x.v, a.y.v}; }
inline Vec2d value(const Vec2d& a) { return a; }

inline std::ostream& operator<<(std::ostream& os, const Vec2d& a) {
  return os << '(' << a.x << ", " << a.y << ')';
}

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
template <class T>
struct Sym2 {
  T xx{}, xy{}, yy{};
};
using Sym2d = Sym2<double>;

/// Frobenius product A:B of two symmetric matrices.
template <class T, class U>
auto frobenius(const Sym2<T>& a, const Sym2<U>& b) {
  return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy;
}

/// General 2x2 matrix, row-major.
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 fromColumns(const Vec2d& c0, const Vec2d& c1) { return {c0.x, c1.x, c0.y, c1.y}; }
  double det() const { return a * d - b * c; }
  Mat2 inverse() const {
    const double id = 1.0 / det();
    return {d * id, -b * id, -c * id, a * id};
  }
  Mat2 transposed() const { return {a, c, b, d}; }
  Vec2d operator*(const Vec2d& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& m) const {
    return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
  }
};

}  // namespace reflectlab
