#pragma once

#include "../errors.hpp"
#include "../symcalc.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hypolab::lyapunov {

using symcalc::Poly;
using symcalc::Rational;

/// p(x) = x^T M x + l.x + c with M symmetric, stored exactly.
struct QuadraticForm
{
  int dim = 0;
  std::vector<Rational> m;  // row-major dim x dim
  std::vector<Rational> linear;
  Rational constant = 0;

  Rational& at(int i, int j) { return m[static_cast<std::size_t>(i * dim + j)]; }
  const Rational& at(int i, int j) const { return m[static_cast<std::size_t>(i * dim + j)]; }

  bool has_linear() const
  {
    for (const auto& l : linear)
      if (l != 0) return true;
    return false;
  }

  Eigen::MatrixXd matrix() const
  {
    Eigen::MatrixXd out(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out(i, j) = symcalc::to_double(at(i, j));
    return out;
  }

  double max_eigenvalue() const
  {
    if (dim == 0) return 0.0;
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(matrix(), Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  }
  double min_eigenvalue() const
  {
    if (dim == 0) return 0.0;
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(matrix(), Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  }

  QuadraticForm& operator+=(const QuadraticForm& o)
  {
    if (dim != o.dim) throw DimensionMismatch(dim, o.dim);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += o.m[i];
    for (std::size_t i = 0; i < linear.size(); ++i) linear[i] += o.linear[i];
    constant += o.constant;
    return *this;
  }
  QuadraticForm& operator*=(const Rational& s)
  {
    for (auto& v : m) v *= s;
    for (auto& v : linear) v *= s;
    constant *= s;
    return *this;
  }
  friend QuadraticForm operator+(QuadraticForm a, const QuadraticForm& b) { return a += b; }
  friend QuadraticForm operator*(const Rational& s, QuadraticForm a) { return a *= s; }
};

inline QuadraticForm quadratic_form(const Poly& p, int dim)
{
  if (p.span() > dim) throw DimensionMismatch(dim, p.span());
  if (p.degree() > 2) throw Unsupported("quadratic_form: polynomial of degree " + std::to_string(p.degree()));
  QuadraticForm q;
  q.dim = dim;
  q.m.assign(static_cast<std::size_t>(dim * dim), Rational(0));
  q.linear.assign(static_cast<std::size_t>(dim), Rational(0));
  for (const auto& [mono, c] : p.terms()) {
    std::vector<int> idx;
    for (int i = 0; i < mono.span(); ++i)
      for (unsigned k = 0; k < mono[i]; ++k) idx.push_back(i);
    if (idx.empty())
      q.constant += c;
    else if (idx.size() == 1)
      q.linear[static_cast<std::size_t>(idx[0])] += c;
    else if (idx[0] == idx[1])
      q.at(idx[0], idx[0]) += c;
    else {
      q.at(idx[0], idx[1]) += c / 2;
      q.at(idx[1], idx[0]) += c / 2;
    }
  }
  return q;
}

/// Exact positive-semidefiniteness of a symmetric rational matrix by LDL^T with diagonal pivoting.
/// A zero pivot on a PSD matrix forces its whole row to vanish, which is checked instead of skipped.
inline bool is_psd(std::vector<Rational> a, int n, bool strict = false)
{
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  auto at = [&](int i, int j) -> Rational& { return a[static_cast<std::size_t>(i * n + j)]; };
  for (int step = 0; step < n; ++step) {
    int piv = -1;
    for (int i = 0; i < n; ++i)
      if (!done[static_cast<std::size_t>(i)] && (piv < 0 || at(i, i) > at(piv, piv))) piv = i;
    const Rational d = at(piv, piv);
    if (d < 0) return false;
    if (d == 0) {
      if (strict) return false;
      for (int i = 0; i < n; ++i)
        if (!done[static_cast<std::size_t>(i)])
          for (int j = 0; j < n; ++j)
            if (!done[static_cast<std::size_t>(j)] && at(i, j) != 0) return false;
      return true;
    }
    done[static_cast<std::size_t>(piv)] = true;
    for (int i = 0; i < n; ++i) {
      if (done[static_cast<std::size_t>(i)] || at(i, piv) == 0) continue;
      const Rational f = at(i, piv) / d;
      for (int j = 0; j < n; ++j)
        if (!done[static_cast<std::size_t>(j)]) at(i, j) -= f * at(piv, j);
    }
  }
  return true;
}

inline bool is_nsd(const QuadraticForm& q)
{
  std::vector<Rational> neg = q.m;
  for (auto& v : neg) v = -v;
  return is_psd(std::move(neg), q.dim);
}

inline bool is_pd(const QuadraticForm& q) { return is_psd(q.m, q.dim, true); }

}  // namespace hypolab::lyapunov
