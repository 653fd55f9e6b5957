#pragma once

#include "site_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <utility>

namespace hypolab::models {

enum class Boundary { free, periodic };

inline std::string to_string(Boundary b) { return b == Boundary::free ? "free" : "periodic"; }

/// Finite set of lattice sites in Z^d, enumerated in the order stored in `sites`.
struct Box
{
  int d = 1;
  int side = 1;
  std::vector<std::vector<int>> sites;

  /// Cube of the given side centred at the origin, lexicographic order.
  static Box cube(int d, int side)
  {
    if (d < 1 || side < 1) throw Error("Box: d and side must be positive");
    Box b;
    b.d = d;
    b.side = side;
    std::vector<int> c(static_cast<std::size_t>(d), 0);
    const int lo = -(side - 1) / 2;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(side);
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t r = k;
      for (int i = d - 1; i >= 0; --i) {
        c[static_cast<std::size_t>(i)] = lo + static_cast<int>(r % static_cast<std::size_t>(side));
        r /= static_cast<std::size_t>(side);
      }
      b.sites.push_back(c);
    }
    return b;
  }

  static Box chain(int n) { return cube(1, n); }

  int size() const { return static_cast<int>(sites.size()); }

  int distance(int a, int b, Boundary bc) const
  {
    int s = 0;
    for (int i = 0; i < d; ++i) {
      int diff = std::abs(sites[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] -
                          sites[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)]);
      if (bc == Boundary::periodic) diff = std::min(diff, side - diff);
      s += diff;
    }
    return s;
  }

  int norm1(int a) const
  {
    int s = 0;
    for (int v : sites[static_cast<std::size_t>(a)]) s += std::abs(v);
    return s;
  }
};

/// q_x(w) = amplitude * tanh(scale * sum_{|y-x| <= range} w_{y,arg_coord}), multiplying the site field `field` at x.
struct TanhCoupling
{
  std::string field;
  double amplitude = 0.0;
  double scale = 1.0;
  int range = 1;
  int arg_coord = 0;
};

struct InteractionSpec
{
  /// Nearest-neighbour strength for G_xy = gamma 1{|x-y| = 1}; ignored when G_explicit is set.
  double gamma = 0.0;
  /// Explicit G over box indices (x, y) -> G_xy.
  std::optional<std::map<std::pair<int, int>, double>> G_explicit;
  std::vector<TanhCoupling> tanh;

  bool empty() const
  {
    if (G_explicit && !G_explicit->empty()) return false;
    return gamma == 0.0 && tanh.empty();
  }
};

/// A site field in numeric form: constant coefficients (eigen-directions) or compiled polynomial components.
struct SiteFieldNum
{
  std::string name;
  std::optional<VectorField> symbolic;
  std::vector<double> constant;  // used when symbolic is empty
  std::optional<symcalc::NumField> compiled;

  void evaluate(std::span<const double> local, std::span<double> out) const
  {
    if (compiled)
      compiled->evaluate(local, out);
    else
      std::copy(constant.begin(), constant.end(), out.begin());
  }

  /// sup over the state space of |coefficient on coordinate c|; infinite if it is a nonconstant polynomial.
  double sup_coefficient(int c) const
  {
    if (!symbolic) return std::abs(constant[static_cast<std::size_t>(c)]);
    const Poly& p = symbolic->component(c);
    if (p.is_zero()) return 0.0;
    if (p.degree() > 0) return std::numeric_limits<double>::infinity();
    return std::abs(symcalc::to_double(p.evaluate_exact({})));
  }
};

inline SiteFieldNum resolve_site_field(const SiteModel& site, const std::string& name)
{
  SiteFieldNum f;
  f.name = name;
  if (site.has_field(name)) {
    f.symbolic = site.field(name);
    f.compiled.emplace(*f.symbolic);
    return f;
  }
  for (const auto& e : site.eigen_directions)
    if (e.name == name) {
      for (const auto& c : e.coeffs) {
        if (std::abs(c.imag()) > 1e-12)
          throw IncompatibleInteraction("eigen-direction '" + name + "' is complex and cannot carry a real coupling");
        f.constant.push_back(c.real());
      }
      return f;
    }
  throw IncompatibleInteraction("site model '" + site.family + "' has no field '" + name + "'");
}

struct CouplingTerm
{
  int site = 0;
  std::vector<int> neighbourhood;
  double amplitude = 0.0;
  double scale = 0.0;
  int arg_coord = 0;
  int field_id = 0;  // index into LatticeModel::coupling_fields
};

class LatticeModel
{
public:
  SiteModel site;
  Box box;
  Boundary boundary = Boundary::free;
  InteractionSpec interaction;
  std::vector<double> weights;
  Eigen::MatrixXd G;  // G(x, y) multiplies w_{y,c} d_{x,c}
  /// Polynomial part: sum_x L_x + sum_{x,y} G_xy w_{y,c} d_{x,c}.
  Generator generator;
  std::vector<SiteFieldNum> coupling_fields;
  std::vector<CouplingTerm> couplings;

  int n_sites() const { return box.size(); }
  int dim() const { return n_sites() * site.dim; }
  int index(int x, int local) const { return x * site.dim + local; }
  bool has_nonpolynomial_terms() const { return !couplings.empty(); }

  /// Variable map embedding site x's coordinates into the lattice.
  std::vector<int> site_map(int x) const
  {
    std::vector<int> m(static_cast<std::size_t>(site.dim));
    for (int k = 0; k < site.dim; ++k) m[static_cast<std::size_t>(k)] = index(x, k);
    return m;
  }

  VectorField site_field(const std::string& name, int x) const { return site.field(name).relabel(site_map(x), dim()); }

  double coupling_value(const CouplingTerm& t, std::span<const double> w) const
  {
    double s = 0.0;
    for (int y : t.neighbourhood) s += w[static_cast<std::size_t>(index(y, t.arg_coord))];
    return t.amplitude * std::tanh(t.scale * s);
  }

  /// Adds the tanh coupling drift to `out` (length dim()).
  void add_coupling_drift(std::span<const double> w, std::span<double> out) const
  {
    std::vector<double> buf(static_cast<std::size_t>(site.dim));
    for (const auto& t : couplings) {
      const double q = coupling_value(t, w);
      if (q == 0.0) continue;
      const auto base = static_cast<std::size_t>(index(t.site, 0));
      coupling_fields[static_cast<std::size_t>(t.field_id)].evaluate(w.subspan(base, static_cast<std::size_t>(site.dim)), buf);
      for (int k = 0; k < site.dim; ++k) out[base + static_cast<std::size_t>(k)] += q * buf[static_cast<std::size_t>(k)];
    }
  }
};

inline std::vector<double> default_weights(const Box& box)
{
  std::vector<double> w;
  for (int x = 0; x < box.size(); ++x) w.push_back(std::ldexp(1.0, -box.norm1(x)));
  return w;
}

inline LatticeModel build_lattice(const SiteModel& site, const Box& box, Boundary boundary, const InteractionSpec& interaction,
                                  std::vector<double> weights = {})
{
  if (box.size() == 0) throw Error("build_lattice: empty box");
  if (weights.empty()) weights = default_weights(box);
  if (static_cast<int>(weights.size()) != box.size()) throw DimensionMismatch(box.size(), static_cast<int>(weights.size()));

  LatticeModel lm;
  lm.site = site;
  lm.box = box;
  lm.boundary = boundary;
  lm.interaction = interaction;
  lm.weights = std::move(weights);
  const int ns = box.size();
  const int total = ns * site.dim;

  lm.G = Eigen::MatrixXd::Zero(ns, ns);
  std::map<std::pair<int, int>, Rational> g_exact;
  if (interaction.G_explicit) {
    for (const auto& [xy, v] : *interaction.G_explicit) {
      if (xy.first < 0 || xy.first >= ns || xy.second < 0 || xy.second >= ns) throw Error("build_lattice: G index outside the box");
      if (xy.first == xy.second) throw Error("build_lattice: G has a diagonal entry");
      lm.G(xy.first, xy.second) = v;
      g_exact[xy] = detail::exact(v, "G");
    }
  } else if (interaction.gamma != 0.0) {
    const Rational gamma = detail::exact(interaction.gamma, "gamma");
    for (int x = 0; x < ns; ++x)
      for (int y = 0; y < ns; ++y)
        if (x != y && box.distance(x, y, boundary) == 1) {
          lm.G(x, y) = interaction.gamma;
          g_exact[{x, y}] = gamma;
        }
  }
  if (!g_exact.empty() && site.coupling_coord < 0)
    throw IncompatibleInteraction("site model '" + site.family + "' has no coordinate for a linear coupling");

  Generator gen(total);
  for (int x = 0; x < ns; ++x) gen += site.generator.relabel(lm.site_map(x), total);
  for (const auto& [xy, v] : g_exact) {
    const int c = site.coupling_coord;
    gen.add_lin(v, detail::field_of(total, {{lm.index(xy.first, c), detail::var(lm.index(xy.second, c))}}));
  }
  lm.generator = gen;

  std::map<std::string, int> field_ids;
  for (const auto& tc : interaction.tanh) {
    if (tc.arg_coord < 0 || tc.arg_coord >= site.dim)
      throw IncompatibleInteraction("tanh coupling argument coordinate " + std::to_string(tc.arg_coord) + " outside the site");
    if (tc.range < 0) throw Error("tanh coupling range must be nonnegative");
    auto it = field_ids.find(tc.field);
    if (it == field_ids.end()) {
      lm.coupling_fields.push_back(resolve_site_field(site, tc.field));
      it = field_ids.emplace(tc.field, static_cast<int>(lm.coupling_fields.size()) - 1).first;
    }
    if (tc.amplitude == 0.0) continue;
    for (int x = 0; x < ns; ++x) {
      CouplingTerm t{x, {}, tc.amplitude, tc.scale, tc.arg_coord, it->second};
      for (int y = 0; y < ns; ++y)
        if (box.distance(x, y, boundary) <= tc.range) t.neighbourhood.push_back(y);
      lm.couplings.push_back(std::move(t));
    }
  }
  return lm;
}

/// sup_w |V_z q_y| for a site field V (coefficients per site coordinate) and one coupling term q_y.
inline double coupling_derivative_sup(const LatticeModel& lm, const SiteFieldNum& v, int z, const CouplingTerm& q)
{
  if (std::find(q.neighbourhood.begin(), q.neighbourhood.end(), z) == q.neighbourhood.end()) return 0.0;
  const double c = v.sup_coefficient(q.arg_coord);
  if (c == 0.0) return 0.0;
  (void)lm;
  return std::abs(q.amplitude * q.scale) * c;
}

}  // namespace hypolab::models
