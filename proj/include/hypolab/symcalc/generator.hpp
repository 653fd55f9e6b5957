#pragma once

#include "vector_field.hpp"

#include <functional>
#include <vector>

namespace hypolab::symcalc {

/// Linear differential operator in canonical form: derivative multi-index -> coefficient.
/// Mixed partials commute, so a multi-index (exponent vector over d_0..d_{n-1})
/// identifies each derivative uniquely; d_i d_j is stored once with i <= j.
class DiffOp
{
public:
  using Terms = std::map<Monomial, Poly>;

  DiffOp() = default;
  explicit DiffOp(int dim) : dim_(dim) {}

  static DiffOp from_field(const VectorField& v)
  {
    DiffOp d(v.dim());
    for (const auto& [i, p] : v.components()) d.add(Monomial::unit(i), p);
    return d;
  }

  static DiffOp multiplication(int dim, const Poly& f)
  {
    DiffOp d(dim);
    d.add(Monomial{}, f);
    return d;
  }

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned order() const
  {
    unsigned o = 0;
    for (const auto& [a, p] : terms_) o = std::max(o, a.degree());
    return o;
  }

  unsigned coefficient_degree() const
  {
    unsigned d = 0;
    for (const auto& [a, p] : terms_) d = std::max(d, p.degree());
    return d;
  }

  const Poly& coefficient(const Monomial& alpha) const
  {
    static const Poly zero;
    auto it = terms_.find(alpha);
    return it == terms_.end() ? zero : it->second;
  }

  void add(const Monomial& alpha, const Poly& p)
  {
    if (p.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(alpha, p);
    if (!inserted) {
      it->second += p;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  DiffOp& operator+=(const DiffOp& o)
  {
    same_dim(o);
    for (const auto& [a, p] : o.terms_) add(a, p);
    return *this;
  }
  DiffOp& operator-=(const DiffOp& o)
  {
    same_dim(o);
    for (const auto& [a, p] : o.terms_) add(a, -p);
    return *this;
  }
  DiffOp& operator*=(const Rational& s)
  {
    if (s == 0) terms_.clear();
    for (auto& [a, p] : terms_) p *= s;
    return *this;
  }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(const Rational& s, DiffOp a) { return a *= s; }

  Poly apply(const Poly& f) const
  {
    Poly out;
    for (const auto& [a, p] : terms_) out += p * f.derivative(a);
    return out;
  }

  bool operator==(const DiffOp& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

  void same_dim(const DiffOp& o) const
  {
    if (dim_ != o.dim_) throw DimensionMismatch(dim_, o.dim_);
  }

  /// Serialized canonical form "(coeff)*d-multi-index" summed in multi-index order.
  std::string str(const char* prefix = "x") const
  {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [a, p] : terms_) {
      if (!first) s += " + ";
      first = false;
      const std::string ds = a.str("d");
      s += "(" + p.str(prefix) + ")*" + (ds.empty() ? std::string("1") : ds);
    }
    return s;
  }

private:
  int dim_ = 0;
  Terms terms_;
};

namespace detail {

inline Integer binomial(unsigned n, unsigned k)
{
  Integer r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Enumerate every multi-index gamma <= alpha.
inline void for_each_submultiindex(const Monomial& alpha, const std::function<void(const Monomial&)>& fn)
{
  std::vector<unsigned> g(static_cast<std::size_t>(alpha.span()), 0);
  while (true) {
    fn(Monomial(g));
    std::size_t i = 0;
    while (i < g.size()) {
      if (g[i] < alpha[static_cast<int>(i)]) {
        ++g[i];
        break;
      }
      g[i] = 0;
      ++i;
    }
    if (i == g.size()) return;
  }
}

}  // namespace detail

/// Composition A o B, expanded with the multivariate Leibniz rule.
inline DiffOp compose(const DiffOp& a, const DiffOp& b)
{
  a.same_dim(b);
  DiffOp out(a.dim());
  for (const auto& [alpha, pa] : a.terms()) {
    detail::for_each_submultiindex(alpha, [&](const Monomial& gamma) {
      Integer mult = 1;
      for (int i = 0; i < alpha.span(); ++i) mult *= detail::binomial(alpha[i], gamma[i]);
      const Monomial rest = alpha.minus(gamma);
      for (const auto& [beta, pb] : b.terms()) {
        Poly c = pa * pb.derivative(gamma);
        c *= Rational(mult);
        out.add(rest * beta, c);
      }
    });
  }
  return out;
}

struct QuadTerm
{
  Rational coeff;
  VectorField left;
  VectorField right;
};

struct LinTerm
{
  Rational coeff;
  VectorField field;
};

/// Formal sum of c * (X o Y) and c * X terms; houses second-order Markov generators.
class Generator
{
public:
  Generator() = default;
  explicit Generator(int dim) : dim_(dim), canonical_(dim) {}

  static Generator from_field(const VectorField& v, const Rational& c = 1)
  {
    Generator g(v.dim());
    g.add_lin(c, v);
    return g;
  }

  int dim() const { return dim_; }
  const std::vector<QuadTerm>& quad_terms() const { return quad_; }
  const std::vector<LinTerm>& lin_terms() const { return lin_; }
  const DiffOp& canonical() const { return canonical_; }

  Generator& add_quad(const Rational& c, const VectorField& left, const VectorField& right)
  {
    check(left);
    check(right);
    if (c == 0) return *this;
    quad_.push_back({c, left, right});
    DiffOp comp = compose(DiffOp::from_field(left), DiffOp::from_field(right));
    comp *= c;
    canonical_ += comp;
    return *this;
  }

  Generator& add_square(const Rational& c, const VectorField& x) { return add_quad(c, x, x); }

  Generator& add_lin(const Rational& c, const VectorField& x)
  {
    check(x);
    if (c == 0 || x.is_zero()) return *this;
    lin_.push_back({c, x});
    DiffOp d = DiffOp::from_field(x);
    d *= c;
    canonical_ += d;
    return *this;
  }

  Generator& operator+=(const Generator& o)
  {
    if (dim_ != o.dim_) throw DimensionMismatch(dim_, o.dim_);
    for (const auto& q : o.quad_) add_quad(q.coeff, q.left, q.right);
    for (const auto& l : o.lin_) add_lin(l.coeff, l.field);
    return *this;
  }

  Generator& operator*=(const Rational& s)
  {
    if (s == 0) {
      *this = Generator(dim_);
      return *this;
    }
    for (auto& q : quad_) q.coeff *= s;
    for (auto& l : lin_) l.coeff *= s;
    canonical_ *= s;
    return *this;
  }

  friend Generator operator+(Generator a, const Generator& b) { return a += b; }
  friend Generator operator-(Generator a, Generator b)
  {
    b *= Rational(-1);
    return a += b;
  }
  friend Generator operator*(const Rational& s, Generator a) { return a *= s; }

  Poly apply(const Poly& f) const { return canonical_.apply(f); }

  unsigned order() const { return canonical_.order(); }
  unsigned coefficient_degree() const { return canonical_.coefficient_degree(); }

  /// Canonical serialization, independent of how the terms were entered.
  std::string str(const char* prefix = "x") const { return canonical_.str(prefix); }

  /// Embed into a larger space, sending variable i to map[i].
  Generator relabel(std::span<const int> map, int new_dim) const
  {
    Generator out(new_dim);
    for (const auto& q : quad_) out.add_quad(q.coeff, q.left.relabel(map, new_dim), q.right.relabel(map, new_dim));
    for (const auto& l : lin_) out.add_lin(l.coeff, l.field.relabel(map, new_dim));
    return out;
  }

  /// First-order part as a field; throws if a genuine second-order or zeroth-order term remains.
  VectorField as_field() const
  {
    VectorField v(dim_);
    for (const auto& [a, p] : canonical_.terms()) {
      if (a.degree() != 1) throw Error("generator is not a first-order field");
      for (int i = 0; i < a.span(); ++i)
        if (a[i] == 1) v.add(i, p);
    }
    return v;
  }

private:
  void check(const VectorField& v) const
  {
    if (v.dim() != dim_) throw DimensionMismatch(dim_, v.dim());
  }

  int dim_ = 0;
  std::vector<QuadTerm> quad_;
  std::vector<LinTerm> lin_;
  DiffOp canonical_;
};

inline Generator operator+(const VectorField& a, const Generator& b) { return Generator::from_field(a) + b; }

/// Equality of canonical forms.
inline bool op_equal(const Generator& a, const Generator& b)
{
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  return a.canonical() == b.canonical();
}

inline Poly apply(const Generator& l, const Poly& f)
{
  if (f.span() > l.dim()) throw DimensionMismatch(l.dim(), f.span());
  return l.apply(f);
}

/// [V, L] as a Generator: c([V,X] o Y + X o [V,Y]) per quadratic term and c[V,X] per linear term.
inline Generator generator_commutator(const VectorField& v, const Generator& l)
{
  if (v.dim() != l.dim()) throw DimensionMismatch(v.dim(), l.dim());
  Generator out(l.dim());
  for (const auto& q : l.quad_terms()) {
    out.add_quad(q.coeff, commutator(v, q.left), q.right);
    out.add_quad(q.coeff, q.left, commutator(v, q.right));
  }
  for (const auto& t : l.lin_terms()) out.add_lin(t.coeff, commutator(v, t.field));
  return out;
}

/// V o L - L o V expanded directly on canonical forms.
inline DiffOp commutator_canonical(const VectorField& v, const Generator& l)
{
  const DiffOp dv = DiffOp::from_field(v);
  return compose(dv, l.canonical()) - compose(l.canonical(), dv);
}

/// All monomials in `dim` variables with total degree <= max_degree.
inline std::vector<Monomial> monomial_basis(int dim, unsigned max_degree)
{
  std::vector<Monomial> out;
  std::vector<unsigned> e(static_cast<std::size_t>(dim), 0);
  std::function<void(int, unsigned)> rec = [&](int var, unsigned left) {
    if (var == dim) {
      out.emplace_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[static_cast<std::size_t>(var)] = k;
      rec(var + 1, left - k);
    }
    e[static_cast<std::size_t>(var)] = 0;
  };
  rec(0, max_degree);
  return out;
}

/// Pointwise-equality oracle: compare actions on monomials up to (coefficient degree + 2).
inline bool agree_on_monomials(const Generator& a, const Generator& b)
{
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  const unsigned deg = std::max(a.coefficient_degree(), b.coefficient_degree()) + 2;
  for (const auto& m : monomial_basis(a.dim(), deg)) {
    const Poly f = Poly::monomial(m, 1);
    if (!(a.apply(f) == b.apply(f))) return false;
  }
  return true;
}

}  // namespace hypolab::symcalc
