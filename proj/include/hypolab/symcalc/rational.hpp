#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace hypolab::symcalc {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact rational value of a finite double (every double is a dyadic rational).
inline Rational to_rational(double v)
{
  if (!std::isfinite(v)) throw std::invalid_argument("to_rational: non-finite value");
  return Rational(v);
}

/// Rational with the shortest decimal expansion that round-trips to v, so 0.1 becomes 1/10.
inline Rational from_decimal(double v)
{
  if (!std::isfinite(v)) throw std::invalid_argument("from_decimal: non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  const std::string s(buf, res.ptr);
  const auto e = s.find('e');
  std::string mant = s.substr(0, e);
  int exp10 = std::stoi(s.substr(e + 1));
  const bool neg = !mant.empty() && mant[0] == '-';
  if (neg) mant.erase(0, 1);
  if (const auto dot = mant.find('.'); dot != std::string::npos) {
    exp10 -= static_cast<int>(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  Integer num(mant);
  Integer scale = 1;
  for (int i = 0; i < std::abs(exp10); ++i) scale *= 10;
  Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
  return neg ? Rational(-r) : r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational make_rational(long num, long den = 1) { return Rational(Integer(num), Integer(den)); }

/// Exact square root when r is the square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& r)
{
  if (r < 0) return std::nullopt;
  const Integer n = boost::multiprecision::numerator(r);
  const Integer d = boost::multiprecision::denominator(r);
  const Integer sn = boost::multiprecision::sqrt(n);
  const Integer sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rational(sn, sd);
}

inline Rational rational_pow(const Rational& base, int e)
{
  Rational out = 1;
  const bool neg = e < 0;
  for (int i = 0; i < (neg ? -e : e); ++i) out *= base;
  if (neg) {
    if (out == 0) throw std::domain_error("rational_pow: zero to a negative power");
    out = 1 / out;
  }
  return out;
}

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace hypolab::symcalc
