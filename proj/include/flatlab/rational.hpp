#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace flatlab {

using Rational = mpq_class;

/// Parses "p/q", "p" or a decimal literal such as "0.25" into a canonical rational.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" (or "p" when q == 1); round-trips through parse_rational.
std::string format_rational(const Rational& value);

/// Exact binary value of a finite double.
Rational rational_from_double(double value);

struct Vec2 {
  Rational x;
  Rational y;

  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(const Rational& s, const Vec2& a) { return {s * a.x, s * a.y}; }
};

inline Rational cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Rational dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Total order on directions by ccw angle from the positive x-axis, in [0, 2pi).
/// Returns <0, 0, >0. Zero vectors are not allowed.
int compare_angle(const Vec2& a, const Vec2& b);

/// True when direction u lies in the ccw sector [from, to) swept from `from` to `to`.
/// A sector with from == to (as directions) is the full turn.
bool in_sector(const Vec2& u, const Vec2& from, const Vec2& to);

}  // namespace flatlab
