#pragma once

#include "site_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>

namespace hypolab::models {

struct HTypeParams
{
  std::array<std::array<double, 2>, 2> G{};  // horizontal diffusion perturbation; G + I > 0
  double delta = 1.0;
  std::array<double, 3> p{};  // drift along X, Y, Z
  std::array<double, 3> q{};  // lattice sigma-coupling coefficients
};

/// Folland-Kaplan gauge on H^1 = R^2 x R and the quantities derived from it.
/// Left-invariant frame: X = d_x - y/2 d_z, Y = d_y + x/2 d_z, Z = d_z, so [X, Y] = Z.
class GaugeFunctions
{
public:
  static constexpr int m = 2;  // horizontal dimension
  static constexpr int r = 1;  // centre dimension

  GaugeFunctions()
      : x_(detail::field_of(3, {{0, 1}, {2, Rational(-1, 2) * detail::var(1)}})),
        y_(detail::field_of(3, {{1, 1}, {2, Rational(1, 2) * detail::var(0)}})), z_(VectorField::partial(3, 2)),
        d_(detail::field_of(3, {{0, detail::var(0)}, {1, detail::var(1)}, {2, Rational(2) * detail::var(2)}}))
  {
    frame_ = {symcalc::NumOp(DiffOp::from_field(x_)), symcalc::NumOp(DiffOp::from_field(y_)),
              symcalc::NumOp(DiffOp::from_field(z_))};
    dil_ = symcalc::NumOp(DiffOp::from_field(d_));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const VectorField& a = i == 0 ? x_ : y_;
        const VectorField& b = j == 0 ? x_ : y_;
        second_[static_cast<std::size_t>(2 * i + j)] =
            symcalc::NumOp(symcalc::compose(DiffOp::from_field(a), DiffOp::from_field(b)));
      }
  }

  const VectorField& X() const { return x_; }
  const VectorField& Y() const { return y_; }
  const VectorField& Z() const { return z_; }
  const VectorField& D() const { return d_; }

  static double N(std::span<const double> w)
  {
    const double s = w[0] * w[0] + w[1] * w[1];
    return std::pow(s * s + 16.0 * w[2] * w[2], 0.25);
  }

  static double W(std::span<const double> w)
  {
    const double n = N(w);
    return std::sqrt(1.0 + n * n);
  }

  /// Euclidean value, gradient and Hessian of N, from F = N^4 = |x|^4 + 16 z^2.
  static symcalc::Jet jet_N(std::span<const double> w)
  {
    const double x = w[0], y = w[1], z = w[2];
    const double s = x * x + y * y;
    const double n = N(w);
    const std::array<double, 3> df = {4 * s * x, 4 * s * y, 32 * z};
    std::array<double, 9> d2f{};
    d2f[0] = 4 * s + 8 * x * x;
    d2f[1] = d2f[3] = 8 * x * y;
    d2f[4] = 4 * s + 8 * y * y;
    d2f[8] = 32;
    const double n3 = n * n * n, n7 = n3 * n3 * n;
    symcalc::Jet j;
    j.value = n;
    j.grad.resize(3);
    j.hess.resize(9);
    for (int a = 0; a < 3; ++a) {
      j.grad[static_cast<std::size_t>(a)] = df[static_cast<std::size_t>(a)] / (4 * n3);
      for (int b = 0; b < 3; ++b)
        j.hess[static_cast<std::size_t>(3 * a + b)] =
            d2f[static_cast<std::size_t>(3 * a + b)] / (4 * n3) - 3 * df[static_cast<std::size_t>(a)] * df[static_cast<std::size_t>(b)] / (16 * n7);
    }
    return j;
  }

  static symcalc::Jet jet_W(std::span<const double> w)
  {
    const symcalc::Jet jn = jet_N(w);
    const double n = jn.value;
    const double wv = std::sqrt(1 + n * n);
    symcalc::Jet j;
    j.value = wv;
    j.grad.resize(3);
    j.hess.resize(9);
    for (int a = 0; a < 3; ++a) {
      j.grad[static_cast<std::size_t>(a)] = n * jn.grad[static_cast<std::size_t>(a)] / wv;
      for (int b = 0; b < 3; ++b) {
        const double na = jn.grad[static_cast<std::size_t>(a)], nb = jn.grad[static_cast<std::size_t>(b)];
        j.hess[static_cast<std::size_t>(3 * a + b)] =
            (na * nb + n * jn.h(a, b, 3)) / wv - n * n * na * nb / (wv * wv * wv);
      }
    }
    return j;
  }

  /// Frame field k (0 = X, 1 = Y, 2 = Z) applied to N.
  double ZN(int k, std::span<const double> w) const { return frame_[static_cast<std::size_t>(k)](w, jet_N(w)); }

  double grad0_sq(std::span<const double> w) const
  {
    const double a = ZN(0, w), b = ZN(1, w);
    return a * a + b * b;
  }

  double sub_laplacian(std::span<const double> w) const
  {
    const auto j = jet_N(w);
    return second_[0](w, j) + second_[3](w, j);
  }

  double DN(std::span<const double> w) const { return dil_(w, jet_N(w)); }

  /// Symmetrised horizontal Hessian 1/2 (Z_i Z_j + Z_j Z_i) N from the frame.
  std::array<double, 4> hessian_sym(std::span<const double> w) const
  {
    const auto j = jet_N(w);
    std::array<double, 4> h{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        h[static_cast<std::size_t>(2 * a + b)] =
            0.5 * (second_[static_cast<std::size_t>(2 * a + b)](w, j) + second_[static_cast<std::size_t>(2 * b + a)](w, j));
    return h;
  }

  /// Closed-form symmetrised Hessian with A = |x|^2 x + 4 J_z x and J(x, y) = (-y, x).
  static std::array<double, 4> hessian_sym_closed(std::span<const double> w)
  {
    const double x = w[0], y = w[1], z = w[2];
    const double s = x * x + y * y;
    const double n = N(w);
    const double n4 = n * n * n * n, n7 = n4 * n * n * n;
    const std::array<double, 2> xv = {x, y};
    const std::array<double, 2> bv = {-y, x};
    const std::array<double, 2> av = {s * x - 4 * z * y, s * y + 4 * z * x};
    std::array<double, 4> h{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        h[2 * ui + uj] = (n4 * s * (i == j ? 1.0 : 0.0) + 2 * n4 * (xv[ui] * xv[uj] + bv[ui] * bv[uj]) - 3 * av[ui] * av[uj]) / n7;
      }
    return h;
  }

  static double grad0_sq_closed(std::span<const double> w)
  {
    const double n = N(w);
    return (w[0] * w[0] + w[1] * w[1]) / (n * n);
  }
  static double sub_laplacian_closed(std::span<const double> w)
  {
    const double n = N(w);
    return 3 * (w[0] * w[0] + w[1] * w[1]) / (n * n * n);
  }
  static double center_derivative_closed(std::span<const double> w)
  {
    const double n = N(w);
    return 8 * w[2] / (n * n * n);
  }
  static double hessian_sum_bound(std::span<const double> w) { return (m + 2.0 * r * m * m + 5.0 * m * m) / N(w); }

  /// Dilation (x, z) -> (s x, s^2 z).
  static std::array<double, 3> dilate(std::span<const double> w, double s) { return {s * w[0], s * w[1], s * s * w[2]}; }

private:
  VectorField x_, y_, z_, d_;
  std::array<symcalc::NumOp, 3> frame_;
  std::array<symcalc::NumOp, 4> second_;
  symcalc::NumOp dil_;
};

inline SiteModel htype_heisenberg(const HTypeParams& prm = {})
{
  using detail::partial;
  if (!(prm.delta > 0)) throw Error("htype_heisenberg: delta must be positive");
  Eigen::Matrix2d gi;
  gi << 1 + prm.G[0][0], prm.G[0][1], prm.G[1][0], 1 + prm.G[1][1];
  const Eigen::Matrix2d sym = 0.5 * (gi + gi.transpose());
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(sym).eigenvalues().minCoeff();
  if (!(min_eig > 0)) throw NotPositive("htype_heisenberg: G + I has nonpositive eigenvalue " + std::to_string(min_eig));
  for (double qr : prm.q)
    if (qr < 0) throw Error("htype_heisenberg: coupling coefficients q_r must be nonnegative");

  const GaugeFunctions gauge;
  const int n = 3;
  SiteModel m;
  m.family = "htype";
  m.dim = n;
  m.var_names = {"x", "y", "z"};
  m.parameters = {{"delta", prm.delta}, {"G11", prm.G[0][0]}, {"G12", prm.G[0][1]}, {"G21", prm.G[1][0]}, {"G22", prm.G[1][1]},
                  {"p1", prm.p[0]},     {"p2", prm.p[1]},     {"p3", prm.p[2]},     {"q1", prm.q[0]},     {"q2", prm.q[1]},
                  {"q3", prm.q[2]},     {"min_eig_G_plus_I", min_eig}};
  const std::array<VectorField, 3> z = {gauge.X(), gauge.Y(), gauge.Z()};
  m.fields = {{"X", z[0]}, {"Y", z[1]}, {"Z", z[2]}, {"D", gauge.D()}};

  Generator l(n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Rational c = Rational(i == j ? 1 : 0) + detail::exact(prm.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], "G");
      l.add_quad(c, z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(j)]);
    }
  for (int k = 0; k < 3; ++k) l.add_lin(detail::exact(prm.p[static_cast<std::size_t>(k)], "p"), z[static_cast<std::size_t>(k)]);
  l.add_lin(-detail::exact(prm.delta, "delta"), gauge.D());
  m.generator = l;

  m.expect("[X,Y] = d_z", symcalc::commutator(z[0], z[1]), partial(n, 2));
  m.expect("[X,Z] = 0", symcalc::commutator(z[0], z[2]), VectorField(n));
  m.expect("[Y,Z] = 0", symcalc::commutator(z[1], z[2]), VectorField(n));
  const int layer[3] = {1, 1, 2};
  const char* names[3] = {"X", "Y", "Z"};
  for (int k = 0; k < 3; ++k)
    m.expect(std::string("[") + names[k] + ",D] = " + std::to_string(layer[k]) + " " + names[k],
             symcalc::commutator(z[static_cast<std::size_t>(k)], gauge.D()), Rational(layer[k]) * z[static_cast<std::size_t>(k)]);
  m.verify();
  return m;
}

/// X^2 + xi Y - lambda x d_x on (x, y, z) with X = d_x + y/2 d_z, Y = d_y - x/2 d_z.
inline SiteModel heisenberg_partial(double xi_in, double lambda_in)
{
  using detail::partial;
  using detail::var;
  if (!(xi_in > 0)) throw Error("heisenberg_partial: xi must be positive");
  if (!(lambda_in >= 0)) throw Error("heisenberg_partial: lambda must be nonnegative");
  const Rational xi = detail::exact(xi_in, "xi"), lambda = detail::exact(lambda_in, "lambda");
  const int n = 3;
  SiteModel m;
  m.family = "heisenberg_partial";
  m.dim = n;
  m.var_names = {"x", "y", "z"};
  m.parameters = {{"xi", xi_in}, {"lambda", lambda_in}};

  const VectorField x = detail::field_of(n, {{0, 1}, {2, Rational(1, 2) * var(1)}});
  const VectorField y = detail::field_of(n, {{1, 1}, {2, Rational(-1, 2) * var(0)}});
  const VectorField d0 = detail::field_of(n, {{0, var(0)}});
  const VectorField z1 = symcalc::commutator(y, x);
  Generator l(n);
  l.add_square(1, x);
  l.add_lin(xi, y);
  l.add_lin(-lambda, d0);
  m.generator = l;
  m.fields = {{"X", x}, {"Y", y}, {"Z0", x}, {"B", y}, {"Z1", z1}, {"D0", d0}};

  m.expect("Z1 = [B,Z0] = d_z", z1, partial(n, 2));
  m.expect("[B,Z1] = 0", symcalc::commutator(y, z1), VectorField(n));
  m.expect("[Z0,Z1] = 0", symcalc::commutator(x, z1), VectorField(n));
  m.expect("[d_x,D0] = d_x", symcalc::commutator(partial(n, 0), d0), partial(n, 0));
  m.expect("[Z1,D0] = 0", symcalc::commutator(z1, d0), VectorField(n));
  Generator expected(n);
  expected.add_lin(-xi / 2, partial(n, 2));
  expected.add_lin(-lambda, partial(n, 0));
  m.expect("[d_x,L] = -xi/2 d_z - lambda d_x", symcalc::generator_commutator(partial(n, 0), l), expected);
  m.expect("[Z1,L] = 0", symcalc::generator_commutator(z1, l), Generator(n));

  if (lambda > 0) {
    const Rational kappa_sq = 2 * lambda / xi;
    m.parameters["kappa"] = std::sqrt(symcalc::to_double(kappa_sq));
    // kappa V = kappa^2 d_x + d_z has rational coefficients whenever kappa^2 does
    const VectorField kv = partial(n, 0, kappa_sq) + partial(n, 2);
    m.fields["kappaV"] = kv;
    m.expect("[kappa V,L] = -lambda kappa V", symcalc::generator_commutator(kv, l), Generator::from_field(kv, -lambda));
    if (const auto kappa = symcalc::exact_sqrt(kappa_sq)) {
      const VectorField v = partial(n, 0, *kappa) + partial(n, 2, 1 / *kappa);
      m.fields["V"] = v;
      m.expect("[V,L] = -lambda V", symcalc::generator_commutator(v, l), Generator::from_field(v, -lambda));
    } else {
      const double k = m.parameters["kappa"];
      m.eigen_directions.push_back({"V", {-lambda_in, 0}, {k, 0, 1 / k}});
      m.notes.push_back("kappa is irrational; V is held numerically and checked through kappa V");
    }
  } else {
    m.notes.push_back("lambda = 0: kappa undefined, V omitted");
  }
  m.verify();
  return m;
}

}  // namespace hypolab::models
