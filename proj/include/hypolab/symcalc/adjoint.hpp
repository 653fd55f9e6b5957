#pragma once

#include "generator.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace hypolab::symcalc {

/// Matrix of ad_drift restricted to the span of constant fields:
/// [drift, basis[i]] = sum_j entries[j][i] basis[j].
struct AdjointMatrix
{
  VectorField drift;
  std::vector<VectorField> basis;
  std::vector<VectorField> brackets;  // [drift, basis[i]], exact
  std::vector<std::vector<Rational>> entries;

  std::size_t size() const { return basis.size(); }

  Eigen::MatrixXd to_eigen() const
  {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        m(j, i) = to_double(entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    return m;
  }
};

namespace detail {

/// Solve sum_j c_j cols[j] = rhs exactly; nullopt when rhs leaves the span.
inline std::optional<std::vector<Rational>> solve_in_span(const std::vector<std::vector<Rational>>& cols,
                                                         const std::vector<Rational>& rhs)
{
  const std::size_t rows = rhs.size();
  const std::size_t k = cols.size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(k + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) a[r][c] = cols[c][r];
    a[r][k] = rhs[r];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < k && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    const Rational inv = 1 / a[row][c];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t cc = 0; cc <= k; ++cc) a[r][cc] -= f * a[row][cc];
    }
    pivot_col.push_back(c);
    ++row;
  }
  if (pivot_col.size() != k) throw Error("adjoint_matrix: basis fields are linearly dependent");
  for (std::size_t r = row; r < rows; ++r)
    if (a[r][k] != 0) return std::nullopt;
  std::vector<Rational> out(k);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) out[pivot_col[i]] = a[i][k];
  return out;
}

}  // namespace detail

inline AdjointMatrix adjoint_matrix(const VectorField& drift, const std::vector<VectorField>& basis)
{
  AdjointMatrix m{drift, basis, {}, {}};
  const std::size_t n = basis.size();
  m.entries.assign(n, std::vector<Rational>(n, Rational(0)));
  if (n == 0) return m;
  std::vector<std::vector<Rational>> cols;
  for (const auto& b : basis) {
    b.same_dim(drift);
    if (!b.is_constant()) throw Error("adjoint_matrix: basis field has non-constant coefficients");
    cols.push_back(b.constant_coefficients());
  }
  for (std::size_t i = 0; i < n; ++i) {
    VectorField br = commutator(drift, basis[i]);
    if (!br.is_constant()) throw NotClosed("adjoint_matrix: [drift, basis " + std::to_string(i) + "] = " + br.str() + " is not constant");
    auto coeffs = detail::solve_in_span(cols, br.constant_coefficients());
    if (!coeffs) throw NotClosed("adjoint_matrix: [drift, basis " + std::to_string(i) + "] leaves the span");
    for (std::size_t j = 0; j < n; ++j) m.entries[j][i] = (*coeffs)[j];
    m.brackets.push_back(std::move(br));
  }
  return m;
}

inline AdjointMatrix adjoint_matrix(const Generator& drift, const std::vector<VectorField>& basis)
{
  if (!drift.quad_terms().empty()) throw Error("adjoint_matrix: drift must be first order");
  return adjoint_matrix(drift.as_field(), basis);
}

struct EigenField
{
  std::complex<double> value;
  std::vector<std::complex<double>> coeffs;  // combination of the basis fields
  double residual = 0;                       // max-norm of [drift,V] - value V over coordinates
};

/// Coefficient-norm residual of [drift, V] - xi V, with V = sum_i coeffs_i basis_i.
inline double eigen_residual(const AdjointMatrix& m, std::complex<double> xi, const std::vector<std::complex<double>>& coeffs)
{
  const int dim = m.drift.dim();
  std::vector<std::complex<double>> r(static_cast<std::size_t>(dim), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto br = m.brackets[i].constant_coefficients();
    const auto b = m.basis[i].constant_coefficients();
    for (int k = 0; k < dim; ++k)
      r[static_cast<std::size_t>(k)] += coeffs[i] * (to_double(br[static_cast<std::size_t>(k)]) - xi * to_double(b[static_cast<std::size_t>(k)]));
  }
  double worst = 0;
  for (const auto& v : r) worst = std::max(worst, std::abs(v));
  return worst;
}

/// Numerical eigen-decomposition of ad_drift on the basis span.
inline std::vector<EigenField> eigenfields(const AdjointMatrix& m, double residual_tol = 1e-10)
{
  std::vector<EigenField> out;
  const auto n = static_cast<Eigen::Index>(m.size());
  if (n == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m.to_eigen());
  if (es.info() != Eigen::Success) throw Error("eigenfields: eigen-decomposition did not converge");
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  const Eigen::VectorXcd vals = es.eigenvalues();

  // A defective matrix yields (numerically) dependent eigenvectors.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vecs);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) < 1e-8 * sv(0))
    throw DefectiveMatrix("eigenfields: eigenvectors are linearly dependent (geometric < algebraic multiplicity)");

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXcd v = vecs.col(k);
    // Fix the phase: largest entry real and positive.
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    v *= std::conj(v(imax)) / std::abs(v(imax));
    v(imax) = std::abs(v(imax));
    if (std::abs(vals(k).imag()) < 1e-14)
      for (Eigen::Index i = 0; i < n; ++i) v(i) = v(i).real();

    EigenField e;
    e.value = vals(k);
    e.coeffs.assign(v.data(), v.data() + n);
    e.residual = eigen_residual(m, e.value, e.coeffs);
    if (e.residual > residual_tol)
      throw Error("eigenfields: residual " + std::to_string(e.residual) + " exceeds tolerance");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace hypolab::symcalc
