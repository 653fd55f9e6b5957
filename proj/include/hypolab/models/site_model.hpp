#pragma once

#include "../errors.hpp"
#include "../symcalc.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace hypolab::models {

using symcalc::DiffOp;
using symcalc::Generator;
using symcalc::Poly;
using symcalc::Rational;
using symcalc::VectorField;

/// A registered algebraic relation and the outcome of checking it.
struct Identity
{
  std::string label;
  std::string lhs;
  std::string rhs;
  bool exact = true;
  double residual = 0.0;
  double tolerance = 0.0;
  bool holds = false;
};

/// Eigen-direction of the drift action, as a complex combination of coordinate partials.
struct EigenDirection
{
  std::string name;
  std::complex<double> value;
  std::vector<std::complex<double>> coeffs;
};

class SiteModel
{
public:
  std::string family;
  int dim = 0;
  std::vector<std::string> var_names;
  Generator generator;
  std::map<std::string, VectorField> fields;
  std::map<std::string, double> parameters;
  std::vector<Identity> identities;
  std::vector<std::string> notes;
  std::vector<EigenDirection> eigen_directions;
  /// Local coordinate the linear coupling G acts on; -1 if the family has none.
  int coupling_coord = -1;

  const VectorField& field(const std::string& name) const
  {
    auto it = fields.find(name);
    if (it == fields.end()) throw Error("model '" + family + "' has no field named '" + name + "'");
    return it->second;
  }

  bool has_field(const std::string& name) const { return fields.count(name) > 0; }

  const EigenDirection& eigen_direction(const std::string& name) const
  {
    for (const auto& e : eigen_directions)
      if (e.name == name) return e;
    throw Error("model '" + family + "' has no eigen-direction '" + name + "'");
  }

  double parameter(const std::string& name) const
  {
    auto it = parameters.find(name);
    if (it == parameters.end()) throw Error("model '" + family + "' has no parameter '" + name + "'");
    return it->second;
  }

  int var_index(const std::string& name) const
  {
    for (std::size_t i = 0; i < var_names.size(); ++i)
      if (var_names[i] == name) return static_cast<int>(i);
    throw Error("model '" + family + "' has no variable '" + name + "'");
  }

  bool all_identities_hold() const
  {
    for (const auto& id : identities)
      if (!id.holds) return false;
    return true;
  }

  // exact relation between fields
  void expect(std::string label, const VectorField& got, const VectorField& expected)
  {
    identities.push_back({std::move(label), got.str(), expected.str(), true, 0.0, 0.0, got == expected});
  }

  void expect(std::string label, const Generator& got, const Generator& expected)
  {
    identities.push_back({std::move(label), got.str(), expected.str(), true, 0.0, 0.0, symcalc::op_equal(got, expected)});
  }

  void expect(std::string label, const DiffOp& got, const DiffOp& expected)
  {
    identities.push_back({std::move(label), got.str(), expected.str(), true, 0.0, 0.0, got == expected});
  }

  void expect_numeric(std::string label, std::string lhs, std::string rhs, double residual, double tol)
  {
    identities.push_back({std::move(label), std::move(lhs), std::move(rhs), false, residual, tol, residual <= tol});
  }

  /// Throws RealizationFailure naming the first relation that does not hold.
  void verify() const
  {
    for (const auto& id : identities)
      if (!id.holds)
        throw RealizationFailure(family + ": relation '" + id.label + "' fails: " + id.lhs + " != " + id.rhs);
  }
};

namespace detail {

inline VectorField partial(int dim, int var, const Rational& c = 1) { return VectorField::partial(dim, var, c); }
inline Poly var(int i) { return Poly::variable(i); }

inline VectorField field_of(int dim, std::initializer_list<std::pair<int, Poly>> comps)
{
  VectorField v(dim);
  for (const auto& [i, p] : comps) v.add(i, p);
  return v;
}

inline Rational exact(double v, const char* what)
{
  if (!std::isfinite(v)) throw Error(std::string("parameter ") + what + " must be finite");
  return symcalc::from_decimal(v);
}

}  // namespace detail

}  // namespace hypolab::models
