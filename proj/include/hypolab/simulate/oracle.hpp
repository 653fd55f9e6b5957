#pragma once

#include "../errors.hpp"
#include "../symcalc.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <map>

namespace hypolab::simulate {

/// Exact moments of a generator that maps polynomials of degree <= k into themselves.
/// With phi the monomial basis and L phi_j = sum_i M_ij phi_i, the vector u(t) = (P_t phi_i)(x)
/// solves u' = M^T u, so P_t f(x) = c^T exp(t M^T) phi(x) for f = c^T phi.
class MomentOracle
{
public:
  MomentOracle(const symcalc::Generator& l, unsigned max_degree) : dim_(l.dim()), basis_(symcalc::monomial_basis(l.dim(), max_degree))
  {
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = static_cast<int>(i);
    const int n = static_cast<int>(basis_.size());
    m_ = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const auto lp = l.apply(symcalc::Poly::monomial(basis_[static_cast<std::size_t>(j)], 1));
      for (const auto& [mono, c] : lp.terms()) {
        const auto it = index_.find(mono);
        if (it == index_.end()) throw NotClosed("MomentOracle: generator raises the degree above " + std::to_string(max_degree));
        m_(it->second, j) = symcalc::to_double(c);
      }
    }
  }

  const Eigen::MatrixXd& matrix() const { return m_; }

  /// E[f(X_t) | X_0 = x0] for polynomial f of degree <= max_degree.
  double expectation(const symcalc::Poly& f, double t, std::span<const double> x0) const
  {
    return coefficients(f).dot(propagator(t) * phi(x0));
  }

  /// (v . grad) P_t f at x0.
  double derivative(const symcalc::Poly& f, std::span<const double> v, double t, std::span<const double> x0) const
  {
    Eigen::VectorXd dphi(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      double s = 0.0;
      for (int k = 0; k < dim_; ++k)
        if (v[static_cast<std::size_t>(k)] != 0.0)
          s += v[static_cast<std::size_t>(k)] * symcalc::Poly::monomial(basis_[i], 1).derivative(k).evaluate(x0);
      dphi(static_cast<Eigen::Index>(i)) = s;
    }
    return coefficients(f).dot(propagator(t) * dphi);
  }

private:
  Eigen::MatrixXd propagator(double t) const { return (t * m_.transpose()).exp(); }

  Eigen::VectorXd phi(std::span<const double> x) const
  {
    Eigen::VectorXd out(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) out(static_cast<Eigen::Index>(i)) = basis_[i].evaluate(x);
    return out;
  }

  Eigen::VectorXd coefficients(const symcalc::Poly& f) const
  {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_.size()));
    for (const auto& [mono, v] : f.terms()) {
      const auto it = index_.find(mono);
      if (it == index_.end()) throw NotClosed("MomentOracle: test function outside the moment basis");
      c(it->second) = symcalc::to_double(v);
    }
    return c;
  }

  int dim_;
  std::vector<symcalc::Monomial> basis_;
  std::map<symcalc::Monomial, int> index_;
  Eigen::MatrixXd m_;
};

}  // namespace hypolab::simulate
