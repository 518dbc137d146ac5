#include "flatlab/rational.hpp"

#include <cmath>

#include "flatlab/error.hpp"

namespace flatlab {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

int half_plane(const Vec2& v) { return (v.y < 0 || (v.y == 0 && v.x < 0)) ? 1 : 0; }

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body = body.substr(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den) || mpz_class(den) == 0)
      throw Error(ErrorCode::ParseError, "bad rational literal '" + text + "'");
    value = Rational(mpz_class(num), mpz_class(den));
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string whole = body.substr(0, dot), frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      throw Error(ErrorCode::ParseError, "bad decimal literal '" + text + "'");
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    value = Rational(mpz_class(whole + frac), den);
  } else {
    if (!all_digits(body)) throw Error(ErrorCode::ParseError, "bad rational literal '" + text + "'");
    value = Rational(mpz_class(body));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return v.get_str();
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "non-finite value");
  Rational r(value);  // mpq_set_d is exact
  r.canonicalize();
  return r;
}

int compare_angle(const Vec2& a, const Vec2& b) {
  int ha = half_plane(a), hb = half_plane(b);
  if (ha != hb) return ha < hb ? -1 : 1;
  int c = sgn(cross(a, b));
  return -c;
}

bool in_sector(const Vec2& u, const Vec2& from, const Vec2& to) {
  Vec2 u_rel{dot(from, u), cross(from, u)};
  Vec2 to_rel{dot(from, to), cross(from, to)};
  if (to_rel.y == 0 && to_rel.x > 0) return true;
  return compare_angle(u_rel, to_rel) < 0;
}

}  // namespace flatlab
