#pragma once

#include "../errors.hpp"
#include "../symcalc.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hypolab::decaylab {

/// Catalog version; bump when a profile or its defaults change so verdicts stay comparable.
inline constexpr const char* kTestFunctionCatalog = "tf-1";

/// f(x) = phi(u) with u = sum_i w_i x_{coords[i]} (w_i = 1 unless given). Profiles: sin-sum (sin u), tanh-sum (tanh u),
/// linear (u), quadratic-bounded (u^2 / (1 + u^2)), constant (1).
class TestFunction
{
public:
  enum class Kind { sin_sum, tanh_sum, linear, quadratic_bounded, constant };

  TestFunction() = default;
  TestFunction(Kind kind, std::vector<int> coords, std::vector<double> weights = {})
      : kind_(kind), coords_(std::move(coords)), weights_(std::move(weights))
  {
    if (weights_.empty()) weights_.assign(coords_.size(), 1.0);
    if (weights_.size() != coords_.size()) throw ConfigError("test function: weights and coordinates differ in length");
  }

  static Kind parse(const std::string& s)
  {
    if (s == "sin-sum") return Kind::sin_sum;
    if (s == "tanh-sum") return Kind::tanh_sum;
    if (s == "linear") return Kind::linear;
    if (s == "quadratic-bounded") return Kind::quadratic_bounded;
    if (s == "constant") return Kind::constant;
    throw ConfigError("unknown test function '" + s + "' (sin-sum, tanh-sum, linear, quadratic-bounded, constant)");
  }

  static std::string name(Kind k)
  {
    switch (k) {
      case Kind::sin_sum: return "sin-sum";
      case Kind::tanh_sum: return "tanh-sum";
      case Kind::linear: return "linear";
      case Kind::quadratic_bounded: return "quadratic-bounded";
      case Kind::constant: return "constant";
    }
    return "?";
  }

  Kind kind() const { return kind_; }
  std::string name() const { return name(kind_); }
  const std::vector<int>& coords() const { return coords_; }
  const std::vector<double>& weights() const { return weights_; }

  double operator()(std::span<const double> x) const { return phi(u(x)); }

  /// grad f written into out (length = state dimension).
  void gradient(std::span<const double> x, std::span<double> out) const
  {
    std::fill(out.begin(), out.end(), 0.0);
    const double d = dphi(u(x));
    for (std::size_t i = 0; i < coords_.size(); ++i) out[static_cast<std::size_t>(coords_[i])] += d * weights_[i];
  }

  /// sup |f|; infinite for the linear profile.
  double sup_norm() const
  {
    if (kind_ == Kind::linear) return coords_.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    return 1.0;
  }

  /// Exact polynomial form when one exists (linear and constant profiles).
  std::optional<symcalc::Poly> poly() const
  {
    if (kind_ == Kind::constant) return symcalc::Poly(1);
    if (kind_ != Kind::linear) return std::nullopt;
    symcalc::Poly p;
    for (std::size_t i = 0; i < coords_.size(); ++i) p += symcalc::from_decimal(weights_[i]) * symcalc::Poly::variable(coords_[i]);
    return p;
  }

private:
  double u(std::span<const double> x) const
  {
    double s = 0.0;
    for (std::size_t i = 0; i < coords_.size(); ++i) s += weights_[i] * x[static_cast<std::size_t>(coords_[i])];
    return s;
  }

  double phi(double u) const
  {
    switch (kind_) {
      case Kind::sin_sum: return std::sin(u);
      case Kind::tanh_sum: return std::tanh(u);
      case Kind::linear: return u;
      case Kind::quadratic_bounded: return u * u / (1 + u * u);
      case Kind::constant: return 1.0;
    }
    return 0.0;
  }

  double dphi(double u) const
  {
    switch (kind_) {
      case Kind::sin_sum: return std::cos(u);
      case Kind::tanh_sum: {
        const double c = std::cosh(u);
        return std::isfinite(c) ? 1 / (c * c) : 0.0;
      }
      case Kind::linear: return 1.0;
      case Kind::quadratic_bounded: return 2 * u / ((1 + u * u) * (1 + u * u));
      case Kind::constant: return 0.0;
    }
    return 0.0;
  }

  Kind kind_ = Kind::sin_sum;
  std::vector<int> coords_;
  std::vector<double> weights_;
};

}  // namespace hypolab::decaylab
