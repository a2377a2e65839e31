#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hwlab/field.hpp"
#include "hwlab/symbol.hpp"

namespace hwlab {

/// Mass centroid per axis, as a circular mean so that it is well defined on the torus.
struct Centroid {
  double x = 0.0;
  double y = 0.0;
};

inline Centroid centroid(const Field& u) {
  const Field f = to_physical(u);
  const Grid& g = f.grid();
  const double two_pi = 2.0 * std::numbers::pi;
  cplx ax{}, ay{};
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const cplx ex = std::polar(1.0, two_pi * g.x(i) / g.lx());
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double w = std::norm(f(i, j));
      ax += w * ex;
      ay += w * std::polar(1.0, two_pi * g.y(j) / g.ly());
    }
  }
  Centroid c;
  if (std::abs(ax) > 0.0) c.x = std::arg(ax) * g.lx() / two_pi;
  if (std::abs(ay) > 0.0) c.y = std::arg(ay) * g.ly() / two_pi;
  return c;
}

/// Periodic coordinate centered at c.
///
/// Equals the signed distance t = x - c on most of the period and returns to
/// zero through an erf-smoothed ramp of width sigma = L/24 around t = +-L/2,
/// so that multiplication by it keeps fields smooth on the torus.
class PeriodicCoordinate {
 public:
  PeriodicCoordinate(double length, double center) : l_(length), c_(center), sigma_(length / 24.0) {}

  double wrap(double x) const {
    double t = std::fmod(x - c_ + 0.5 * l_, l_);
    if (t < 0.0) t += l_;
    return t - 0.5 * l_;
  }
  double value(double x) const {
    const double t = wrap(x);
    return t - l_ * step(t - 0.5 * l_) + l_ * step(-t - 0.5 * l_);
  }
  double derivative(double x) const {
    const double t = wrap(x);
    return 1.0 - l_ * bump(t - 0.5 * l_) - l_ * bump(-t - 0.5 * l_);
  }
  double length() const { return l_; }

 private:
  double step(double s) const { return 0.5 * std::erfc(-s / (std::numbers::sqrt2 * sigma_)); }
  double bump(double s) const {
    const double z = s / sigma_;
    return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
  }

  double l_, c_, sigma_;
};

namespace detail {

// Flow of dx/ds = rate * X(x) for time s, with log of its Jacobian; RK4.
struct FlowSample {
  double position;
  double log_jacobian;
};

inline FlowSample flow_1d(const PeriodicCoordinate& c, double rate, double x0, double s) {
  const int steps = std::max(64, static_cast<int>(std::ceil(std::abs(s) * 2000.0)));
  const double h = s / steps;
  double x = x0, lj = 0.0;
  auto fx = [&](double z) { return rate * c.value(z); };
  auto fj = [&](double z) { return rate * c.derivative(z); };
  for (int k = 0; k < steps; ++k) {
    const double k1 = fx(x), j1 = fj(x);
    const double k2 = fx(x + 0.5 * h * k1), j2 = fj(x + 0.5 * h * k1);
    const double k3 = fx(x + 0.5 * h * k2), j3 = fj(x + 0.5 * h * k2);
    const double k4 = fx(x + h * k3), j4 = fj(x + h * k3);
    x += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    lj += h * (j1 + 2 * j2 + 2 * j3 + j4) / 6.0;
  }
  return {x, lj};
}

// E[i][k] = trig basis function k evaluated at pts[i]; the Nyquist mode uses its cosine part.
inline std::vector<cplx> trig_eval_matrix(std::size_t n, double length, double origin, const std::vector<double>& pts) {
  const auto k = fft_wavenumbers(n, length);
  std::vector<cplx> e(pts.size() * n);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t m = 0; m < n; ++m) {
      const double ph = k[m] * (pts[i] - origin);
      e[i * n + m] = (m == n / 2) ? cplx(std::cos(ph)) : std::polar(1.0, ph);
    }
  return e;
}

}  // namespace detail

/// Evaluate the trigonometric interpolant of u at the tensor points (px[i], py[j]).
inline Field resample_separable(const Field& u, const std::vector<double>& px, const std::vector<double>& py) {
  const Field s = to_spectral(u);
  const Grid& g = s.grid();
  const std::size_t nx = g.nx(), ny = g.ny();
  require(px.size() == nx && py.size() == ny, "resample: point count must match the grid");
  const auto ex = detail::trig_eval_matrix(nx, g.lx(), g.x(0), px);
  const auto ey = detail::trig_eval_matrix(ny, g.ly(), g.y(0), py);
  // a(i, m) = sum_k ex(i, k) s(k, m)
  std::vector<cplx> a(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t k = 0; k < nx; ++k) {
      const cplx w = ex[i * nx + k];
      const cplx* src = &s.values()[k * ny];
      cplx* dst = &a[i * ny];
      for (std::size_t m = 0; m < ny; ++m) dst[m] += w * src[m];
    }
  Field out(u.grid_ptr());
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const cplx* row = &a[i * ny];
      const cplx* ej = &ey[j * ny];
      cplx acc{};
      for (std::size_t m = 0; m < ny; ++m) acc += ej[m] * row[m];
      out(i, j) = acc;
    }
  return in_representation(std::move(out), u.representation());
}

/// Mass-preserving anisotropic dilation on the fixed periodic grid.
///
/// T_lambda u = sqrt(J) u o Phi, Phi the time-ln(lambda) flow of (X/2, Y) with
/// X, Y the smoothed periodic coordinates about the centroid of u. Where those
/// coordinates are linear this is lambda^{3/4} u(lambda^{1/2} x, lambda y).
inline Field t_lambda(const Field& u, double lambda) {
  require(lambda > 0.0, "dilation parameter must be positive");
  if (lambda == 1.0) return u;
  const Grid& g = u.grid();
  const Centroid c = centroid(u);
  const PeriodicCoordinate cx(g.lx(), c.x), cy(g.ly(), c.y);
  const double s = std::log(lambda);
  std::vector<double> px(g.nx()), py(g.ny()), jx(g.nx()), jy(g.ny());
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const auto f = detail::flow_1d(cx, 0.5, g.x(i), s);
    px[i] = f.position;
    jx[i] = std::exp(0.5 * f.log_jacobian);
  }
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const auto f = detail::flow_1d(cy, 1.0, g.y(j), s);
    py[j] = f.position;
    jy[j] = std::exp(0.5 * f.log_jacobian);
  }
  Field out = to_physical(resample_separable(u, px, py));
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) out(i, j) *= jx[i] * jy[j];
  return in_representation(std::move(out), u.representation());
}

/// Exact discrete dilation: the same samples on the box (lx/sqrt(lambda), ly/lambda), times lambda^{3/4}.
inline Field t_lambda_rescaled(const Field& u, double lambda) {
  require(lambda > 0.0, "dilation parameter must be positive");
  const Grid& g = u.grid();
  auto grid = make_grid(g.nx(), g.ny(), g.lx() / std::sqrt(lambda), g.ly() / lambda);
  Field out(grid, std::vector<cplx>(u.values().begin(), u.values().end()), u.representation());
  out *= std::pow(lambda, 0.75);
  return out;
}

/// Multiply by a separable real weight wx(i) * wy(j) in physical space.
inline Field multiply_separable(const Field& u, const std::vector<double>& wx, const std::vector<double>& wy) {
  Field out = to_physical(u);
  const Grid& g = out.grid();
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) out(i, j) *= wx[i] * wy[j];
  return out;
}

/// Scaling direction d/dlambda T_lambda q at lambda = 1:
///   psi = (3/4) q + (1/2) x d_x q + y d_y q,
/// with x, y the smoothed centroid coordinates, written in the skew form
///   (1/2)(V.grad q + div(V q)),  V = (x/2, y),
/// so that re<q, psi> vanishes at the discrete level.
inline Field psi_omega(const Field& q) {
  const Grid& g = q.grid();
  const Centroid c = centroid(q);
  const PeriodicCoordinate cx(g.lx(), c.x), cy(g.ly(), c.y);
  std::vector<double> vx(g.nx()), vy(g.ny()), ones_x(g.nx(), 1.0), ones_y(g.ny(), 1.0);
  for (std::size_t i = 0; i < g.nx(); ++i) vx[i] = 0.5 * cx.value(g.x(i));
  for (std::size_t j = 0; j < g.ny(); ++j) vy[j] = cy.value(g.y(j));

  const Field qp = to_physical(q);
  Field out = multiply_separable(dx(qp), vx, ones_y);
  out += to_physical(dx(multiply_separable(qp, vx, ones_y)));
  out += multiply_separable(dy(qp), ones_x, vy);
  out += to_physical(dy(multiply_separable(qp, ones_x, vy)));
  out *= 0.5;
  return in_representation(std::move(out), q.representation());
}

}  // namespace hwlab
