#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "hwlab/functionals.hpp"

namespace hwlab {

struct OrbitFit {
  double theta = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double distance = 0.0;  ///< || u - e^{i theta} q(. + tau) ||_X
};

/// e^{i theta} q(x + tau1, y + tau2) by Fourier shift.
inline Field shift_and_rotate(const Field& q, double theta, double tau1, double tau2) {
  const cplx rot = std::polar(1.0, theta);
  return apply_multiplier(q, [&](double xi, double eta, std::size_t, std::size_t) {
    return rot * std::polar(1.0, xi * tau1 + eta * tau2);
  });
}

namespace detail {

inline double wrap_shift(double t, double length) {
  t = std::remainder(t, length);
  return t;
}

}  // namespace detail

/// Closest point of the orbit {e^{i theta} q(. + tau)} to u in the X norm.
///
/// Integer shifts come from one FFT of the X-weighted cross spectrum; the
/// maximizing shift is refined by Newton steps on |C(tau)|^2, and the phase is
/// arg C(tau) in closed form.
inline OrbitFit orbital_fit(const Field& u, const Field& q) {
  const Field su = to_spectral(u);
  const Field sq = to_spectral(q);
  require(su.same_grid(sq), "orbital_fit: fields live on different grids");
  const Grid& g = su.grid();
  const std::size_t nx = g.nx(), ny = g.ny();
  const auto& xi = g.xi();
  const auto& eta = g.eta();

  // C(tau) = area * sum_k G_k e^{-i k.tau},  G = w u^ conj(q^)
  std::vector<cplx> gk(g.size());
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double w = xi[i] * xi[i] + std::abs(eta[j]) + 1.0;
      gk[i * ny + j] = w * su(i, j) * std::conj(sq(i, j));
    }
  std::vector<cplx> c = gk;
  fft::dft2(c, nx, ny, fft::Sign::forward);
  std::size_t best = 0;
  for (std::size_t k = 1; k < c.size(); ++k)
    if (std::abs(c[k]) > std::abs(c[best])) best = k;

  std::array<double, 2> tau{static_cast<double>(best / ny) * g.dx(), static_cast<double>(best % ny) * g.dy()};

  auto eval = [&](const std::array<double, 2>& t, cplx& val, std::array<cplx, 2>& grad, std::array<cplx, 3>& hess) {
    val = 0.0;
    grad = {};
    hess = {};
    std::vector<cplx> ey(ny);
    for (std::size_t j = 0; j < ny; ++j) ey[j] = std::polar(1.0, -eta[j] * t[1]);
    for (std::size_t i = 0; i < nx; ++i) {
      const cplx ex = std::polar(1.0, -xi[i] * t[0]);
      for (std::size_t j = 0; j < ny; ++j) {
        const cplx term = gk[i * ny + j] * ex * ey[j];
        val += term;
        grad[0] += cplx(0, -xi[i]) * term;
        grad[1] += cplx(0, -eta[j]) * term;
        hess[0] += -xi[i] * xi[i] * term;
        hess[1] += -xi[i] * eta[j] * term;
        hess[2] += -eta[j] * eta[j] * term;
      }
    }
  };

  for (int it = 0; it < 30; ++it) {
    cplx v;
    std::array<cplx, 2> d;
    std::array<cplx, 3> h;
    eval(tau, v, d, h);
    // f = |C|^2
    const double f1 = 2.0 * std::real(std::conj(v) * d[0]);
    const double f2 = 2.0 * std::real(std::conj(v) * d[1]);
    const double h11 = 2.0 * std::real(std::conj(d[0]) * d[0] + std::conj(v) * h[0]);
    const double h12 = 2.0 * std::real(std::conj(d[0]) * d[1] + std::conj(v) * h[1]);
    const double h22 = 2.0 * std::real(std::conj(d[1]) * d[1] + std::conj(v) * h[2]);
    const double det = h11 * h22 - h12 * h12;
    if (!(h11 < 0.0 && det > 0.0)) break;  // not locally concave: keep the lattice maximum
    double s1 = -(h22 * f1 - h12 * f2) / det;
    double s2 = -(h11 * f2 - h12 * f1) / det;
    s1 = std::clamp(s1, -g.dx(), g.dx());
    s2 = std::clamp(s2, -g.dy(), g.dy());
    tau[0] += s1;
    tau[1] += s2;
    if (std::abs(s1) < 1e-14 * g.lx() && std::abs(s2) < 1e-14 * g.ly()) break;
  }

  cplx v;
  std::array<cplx, 2> d;
  std::array<cplx, 3> h;
  eval(tau, v, d, h);
  OrbitFit out;
  out.theta = std::abs(v) > 0.0 ? std::arg(v) : 0.0;
  out.tau1 = detail::wrap_shift(tau[0], g.lx());
  out.tau2 = detail::wrap_shift(tau[1], g.ly());
  const Field fit = shift_and_rotate(sq, out.theta, out.tau1, out.tau2);
  out.distance = x_norm(su - fit);
  return out;
}

/// Distance from u to the orbit of q in the X norm.
inline double orbital_distance(const Field& u, const Field& q) { return orbital_fit(u, q).distance; }

}  // namespace hwlab
