#pragma once

#include "generator.hpp"

#include <span>
#include <vector>

namespace hypolab::symcalc {

/// Double-precision snapshot of a Poly for fast repeated evaluation.
class NumPoly
{
public:
  NumPoly() = default;
  explicit NumPoly(const Poly& p)
  {
    for (const auto& [m, c] : p.terms()) {
      Term t{to_double(c), {}};
      for (int i = 0; i < m.span(); ++i)
        if (m[i] > 0) t.factors.push_back({i, m[i]});
      terms_.push_back(std::move(t));
    }
  }

  bool is_zero() const { return terms_.empty(); }

  double operator()(std::span<const double> x) const
  {
    double v = 0.0;
    for (const auto& t : terms_) {
      double m = t.coeff;
      for (const auto& [var, e] : t.factors) {
        const double xv = x[static_cast<std::size_t>(var)];
        for (unsigned k = 0; k < e; ++k) m *= xv;
      }
      v += m;
    }
    return v;
  }

private:
  struct Term
  {
    double coeff;
    std::vector<std::pair<int, unsigned>> factors;
  };
  std::vector<Term> terms_;
};

/// Compiled vector field x -> (p_i(x))_i.
class NumField
{
public:
  NumField() = default;
  explicit NumField(const VectorField& v) : dim_(v.dim())
  {
    for (const auto& [i, p] : v.components()) comps_.emplace_back(i, NumPoly(p));
  }

  int dim() const { return dim_; }

  void evaluate(std::span<const double> x, std::span<double> out) const
  {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& [i, p] : comps_) out[static_cast<std::size_t>(i)] = p(x);
  }

  std::vector<double> operator()(std::span<const double> x) const
  {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    evaluate(x, out);
    return out;
  }

private:
  int dim_ = 0;
  std::vector<std::pair<int, NumPoly>> comps_;
};

/// Local jet of a scalar function at a point: value, gradient, row-major Hessian.
struct Jet
{
  double value = 0;
  std::vector<double> grad;
  std::vector<double> hess;

  double h(int i, int j, int dim) const { return hess[static_cast<std::size_t>(i * dim + j)]; }
};

/// Numeric application of an operator of order <= 2 to a function given by its jet.
class NumOp
{
public:
  NumOp() = default;
  explicit NumOp(const DiffOp& d) : dim_(d.dim())
  {
    if (d.order() > 2) throw Unsupported("NumOp: operator order above 2");
    for (const auto& [alpha, p] : d.terms()) {
      Entry e{-1, -1, NumPoly(p)};
      for (int i = 0; i < alpha.span(); ++i)
        for (unsigned k = 0; k < alpha[i]; ++k) (e.i < 0 ? e.i : e.j) = i;
      entries_.push_back(std::move(e));
    }
  }
  explicit NumOp(const Generator& g) : NumOp(g.canonical()) {}

  double operator()(std::span<const double> x, const Jet& f) const
  {
    double v = 0.0;
    for (const auto& e : entries_) {
      double d;
      if (e.i < 0)
        d = f.value;
      else if (e.j < 0)
        d = f.grad[static_cast<std::size_t>(e.i)];
      else
        d = f.h(e.i, e.j, dim_);
      v += e.coeff(x) * d;
    }
    return v;
  }

private:
  struct Entry
  {
    int i, j;
    NumPoly coeff;
  };
  int dim_ = 0;
  std::vector<Entry> entries_;
};

/// Exact jet of a polynomial at a double point.
inline Jet poly_jet(const Poly& f, std::span<const double> x, int dim)
{
  Jet j;
  j.value = f.evaluate(x);
  j.grad.resize(static_cast<std::size_t>(dim));
  j.hess.resize(static_cast<std::size_t>(dim * dim));
  for (int a = 0; a < dim; ++a) {
    const Poly fa = f.derivative(a);
    j.grad[static_cast<std::size_t>(a)] = fa.evaluate(x);
    for (int b = 0; b < dim; ++b) j.hess[static_cast<std::size_t>(a * dim + b)] = fa.derivative(b).evaluate(x);
  }
  return j;
}

}  // namespace hypolab::symcalc
