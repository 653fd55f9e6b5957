#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace hypolab::symcalc {

/// Exponent multi-index over global variable indices. Trailing zeros are
/// trimmed so that equal multi-indices compare equal regardless of length.
class Monomial
{
public:
  Monomial() = default;
  explicit Monomial(std::vector<unsigned> exps) : exps_(std::move(exps)) { trim(); }

  static Monomial unit(int var, unsigned power = 1)
  {
    std::vector<unsigned> e(static_cast<std::size_t>(var) + 1, 0);
    e[static_cast<std::size_t>(var)] = power;
    return Monomial(std::move(e));
  }

  unsigned operator[](int var) const
  {
    return var < static_cast<int>(exps_.size()) ? exps_[static_cast<std::size_t>(var)] : 0;
  }

  /// One past the largest variable index with a nonzero exponent.
  int span() const { return static_cast<int>(exps_.size()); }

  unsigned degree() const
  {
    unsigned d = 0;
    for (unsigned e : exps_) d += e;
    return d;
  }

  bool is_one() const { return exps_.empty(); }

  const std::vector<unsigned>& exponents() const { return exps_; }

  Monomial operator*(const Monomial& o) const
  {
    std::vector<unsigned> e(std::max(exps_.size(), o.exps_.size()), 0);
    for (std::size_t i = 0; i < exps_.size(); ++i) e[i] += exps_[i];
    for (std::size_t i = 0; i < o.exps_.size(); ++i) e[i] += o.exps_[i];
    return Monomial(std::move(e));
  }

  /// Componentwise a <= b.
  bool divides(const Monomial& o) const
  {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > o[static_cast<int>(i)]) return false;
    return true;
  }

  Monomial minus(const Monomial& o) const
  {
    std::vector<unsigned> e = exps_;
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= o[static_cast<int>(i)];
    return Monomial(std::move(e));
  }

  Monomial with(int var, unsigned power) const
  {
    std::vector<unsigned> e = exps_;
    if (static_cast<int>(e.size()) <= var) e.resize(static_cast<std::size_t>(var) + 1, 0);
    e[static_cast<std::size_t>(var)] = power;
    return Monomial(std::move(e));
  }

  double evaluate(std::span<const double> x) const
  {
    double v = 1.0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
      for (unsigned k = 0; k < exps_[i]; ++k) v *= x[i];
    return v;
  }

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;

  /// e.g. "x0^2*x3"; empty string for the unit monomial.
  std::string str(const char* prefix = "x") const
  {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] == 0) continue;
      if (!first) os << '*';
      first = false;
      os << prefix << i;
      if (exps_[i] > 1) os << '^' << exps_[i];
    }
    return os.str();
  }

private:
  void trim()
  {
    while (!exps_.empty() && exps_.back() == 0) exps_.pop_back();
  }

  std::vector<unsigned> exps_;
};

/// Exact multivariate polynomial with rational coefficients.
class Poly
{
public:
  using Terms = std::map<Monomial, Rational>;

  Poly() = default;
  Poly(const Rational& c) { add_term(Monomial{}, c); }  // NOLINT: implicit scalar promotion is intended
  Poly(int c) : Poly(Rational(c)) {}                     // NOLINT

  static Poly variable(int var) { return monomial(Monomial::unit(var), 1); }

  static Poly monomial(const Monomial& m, const Rational& c)
  {
    Poly p;
    p.add_term(m, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

  Rational constant_term() const
  {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational coefficient(const Monomial& m) const
  {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  unsigned degree() const
  {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  /// One past the largest variable index appearing.
  int span() const
  {
    int s = 0;
    for (const auto& [m, c] : terms_) s = std::max(s, m.span());
    return s;
  }

  void add_term(const Monomial& m, const Rational& c)
  {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o)
  {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Poly& operator-=(const Poly& o)
  {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Poly& operator*=(const Rational& s)
  {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a)
  {
    a *= Rational(-1);
    return a;
  }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }

  friend Poly operator*(const Poly& a, const Poly& b)
  {
    Poly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }

  Poly derivative(int var) const
  {
    Poly out;
    for (const auto& [m, c] : terms_) {
      const unsigned e = m[var];
      if (e == 0) continue;
      out.add_term(m.with(var, e - 1), c * e);
    }
    return out;
  }

  /// Mixed partial derivative with the given multi-index.
  Poly derivative(const Monomial& alpha) const
  {
    Poly out = *this;
    for (int v = 0; v < alpha.span(); ++v)
      for (unsigned k = 0; k < alpha[v]; ++k) out = out.derivative(v);
    return out;
  }

  double evaluate(std::span<const double> x) const
  {
    double v = 0.0;
    for (const auto& [m, c] : terms_) v += to_double(c) * m.evaluate(x);
    return v;
  }

  Rational evaluate_exact(std::span<const Rational> x) const
  {
    Rational v = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < m.span(); ++i)
        for (unsigned k = 0; k < m[i]; ++k) t *= x[static_cast<std::size_t>(i)];
      v += t;
    }
    return v;
  }

  /// Replace variable indices via `map[old] = new`.
  Poly relabel(std::span<const int> map) const
  {
    Poly out;
    for (const auto& [m, c] : terms_) {
      std::vector<unsigned> e;
      for (int i = 0; i < m.span(); ++i) {
        if (m[i] == 0) continue;
        const auto ni = static_cast<std::size_t>(map[static_cast<std::size_t>(i)]);
        if (e.size() <= ni) e.resize(ni + 1, 0);
        e[ni] += m[i];
      }
      out.add_term(Monomial(std::move(e)), c);
    }
    return out;
  }

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  /// Canonical text: terms in increasing monomial order, "c*x0^2*x1".
  std::string str(const char* prefix = "x") const
  {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational mag = c < 0 ? Rational(-c) : c;
      if (first)
        os << (c < 0 ? "-" : "");
      else
        os << (c < 0 ? " - " : " + ");
      first = false;
      const std::string ms = m.str(prefix);
      if (ms.empty())
        os << mag.str();
      else if (mag == 1)
        os << ms;
      else
        os << mag.str() << '*' << ms;
    }
    return os.str();
  }

private:
  Terms terms_;
};

}  // namespace hypolab::symcalc
