#pragma once

#include "../errors.hpp"
#include "poly.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace hypolab::symcalc {

/// First-order operator sum_i p_i(x) d_i on R^dim with polynomial components.
class VectorField
{
public:
  VectorField() = default;
  explicit VectorField(int dim) : dim_(dim) {}

  static VectorField partial(int dim, int var, const Rational& coeff = 1)
  {
    VectorField v(dim);
    v.set(var, Poly(coeff));
    return v;
  }

  /// Constant field with the given coefficient vector.
  static VectorField constant(std::span<const Rational> coeffs)
  {
    VectorField v(static_cast<int>(coeffs.size()));
    for (std::size_t i = 0; i < coeffs.size(); ++i) v.set(static_cast<int>(i), Poly(coeffs[i]));
    return v;
  }

  int dim() const { return dim_; }
  const std::map<int, Poly>& components() const { return comps_; }

  const Poly& component(int var) const
  {
    static const Poly zero;
    auto it = comps_.find(var);
    return it == comps_.end() ? zero : it->second;
  }

  void set(int var, Poly p)
  {
    check_var(var);
    if (p.is_zero())
      comps_.erase(var);
    else
      comps_[var] = std::move(p);
  }

  void add(int var, const Poly& p)
  {
    check_var(var);
    Poly sum = component(var) + p;
    set(var, std::move(sum));
  }

  bool is_zero() const { return comps_.empty(); }

  bool is_constant() const
  {
    for (const auto& [i, p] : comps_)
      if (!p.is_constant()) return false;
    return true;
  }

  unsigned coefficient_degree() const
  {
    unsigned d = 0;
    for (const auto& [i, p] : comps_) d = std::max(d, p.degree());
    return d;
  }

  /// X f = sum_i p_i d_i f.
  Poly apply(const Poly& f) const
  {
    Poly out;
    for (const auto& [i, p] : comps_) out += p * f.derivative(i);
    return out;
  }

  std::vector<double> evaluate(std::span<const double> x) const
  {
    std::vector<double> v(static_cast<std::size_t>(dim_), 0.0);
    for (const auto& [i, p] : comps_) v[static_cast<std::size_t>(i)] = p.evaluate(x);
    return v;
  }

  /// Coefficients of a constant field; throws if any component is non-constant.
  std::vector<Rational> constant_coefficients() const
  {
    std::vector<Rational> c(static_cast<std::size_t>(dim_), Rational(0));
    for (const auto& [i, p] : comps_) {
      if (!p.is_constant()) throw Error("constant_coefficients: field has non-constant coefficients");
      c[static_cast<std::size_t>(i)] = p.constant_term();
    }
    return c;
  }

  VectorField& operator+=(const VectorField& o)
  {
    same_dim(o);
    for (const auto& [i, p] : o.comps_) add(i, p);
    return *this;
  }

  VectorField& operator-=(const VectorField& o)
  {
    same_dim(o);
    for (const auto& [i, p] : o.comps_) add(i, -p);
    return *this;
  }

  VectorField& operator*=(const Rational& s)
  {
    if (s == 0) comps_.clear();
    for (auto& [i, p] : comps_) p *= s;
    return *this;
  }

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator-(VectorField a) { return a *= Rational(-1); }
  friend VectorField operator*(const Rational& s, VectorField a) { return a *= s; }

  /// Pointwise multiplication by a polynomial function.
  friend VectorField operator*(const Poly& f, const VectorField& a)
  {
    VectorField out(a.dim_);
    for (const auto& [i, p] : a.comps_) out.set(i, f * p);
    return out;
  }

  bool operator==(const VectorField& o) const { return dim_ == o.dim_ && comps_ == o.comps_; }

  /// Embed into a larger space, sending variable i to map[i].
  VectorField relabel(std::span<const int> map, int new_dim) const
  {
    VectorField out(new_dim);
    for (const auto& [i, p] : comps_) out.set(map[static_cast<std::size_t>(i)], p.relabel(map));
    return out;
  }

  std::string str(const char* prefix = "x") const
  {
    if (comps_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [i, p] : comps_) {
      if (!first) s += " + ";
      first = false;
      s += "(" + p.str(prefix) + ")*d" + std::to_string(i);
    }
    return s;
  }

  void same_dim(const VectorField& o) const
  {
    if (dim_ != o.dim_) throw DimensionMismatch(dim_, o.dim_);
  }

private:
  void check_var(int var) const
  {
    if (var < 0 || var >= dim_) throw Error("variable index " + std::to_string(var) + " outside dimension " + std::to_string(dim_));
  }

  int dim_ = 0;
  std::map<int, Poly> comps_;
};

/// Lie bracket [X,Y] = X o Y - Y o X, again a first-order field.
inline VectorField commutator(const VectorField& x, const VectorField& y)
{
  x.same_dim(y);
  VectorField out(x.dim());
  for (int k = 0; k < x.dim(); ++k) {
    Poly c = x.apply(y.component(k)) - y.apply(x.component(k));
    out.set(k, std::move(c));
  }
  return out;
}

}  // namespace hypolab::symcalc
