#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "hwlab/error.hpp"
#include "hwlab/fft.hpp"

namespace hwlab {

/// C_*(s) = integral over R of |e^{ir} - 1|^2 / |r|^{1+2s} dr, for s in (0, 1).
///
/// The integrand is 2(1 - cos r)/|r|^{1+2s}. Near r = 0 the series
/// (1 - cos r) = r^2/2 - r^4/24 + r^6/720 - ... is integrated term by term; the
/// middle range uses adaptive Gauss-Kronrod per period; the oscillatory tail
/// beyond R = 2 pi M is closed with its asymptotic expansion.
inline double frac_constant(double s) {
  require(s > 0.0 && s < 1.0, "fractional order must lie in (0, 1)");
  using boost::math::quadrature::gauss_kronrod;
  const double a = 1.0 + 2.0 * s;  // decay exponent
  const double eps = 1e-2;

  // [0, eps]: sum_n (-1)^{n+1} r^{2n}/(2n)! integrated against r^{-a}
  double head = 0.0;
  double fact = 2.0;  // (2n)!
  for (int n = 1; n <= 6; ++n) {
    const double p = 2.0 * n - a + 1.0;
    head += ((n % 2 == 1) ? 1.0 : -1.0) * std::pow(eps, p) / (p * fact);
    fact *= (2.0 * n + 1.0) * (2.0 * n + 2.0);
  }

  auto f = [a](double r) { return (1.0 - std::cos(r)) * std::pow(r, -a); };
  constexpr int periods = 400;
  const double two_pi = 2.0 * std::numbers::pi;
  double mid = gauss_kronrod<double, 31>::integrate(f, eps, two_pi, 20, 1e-14);
  for (int k = 1; k < periods; ++k)
    mid += gauss_kronrod<double, 31>::integrate(f, two_pi * k, two_pi * (k + 1), 15, 1e-14);

  // [R, inf): int r^{-a} - int cos(r) r^{-a}, with sin R = 0 and cos R = 1.
  const double big_r = two_pi * periods;
  const double mono = std::pow(big_r, 1.0 - a) / (a - 1.0);
  const double osc = a * std::pow(big_r, -a - 1.0) - a * (a + 1.0) * (a + 2.0) * std::pow(big_r, -a - 3.0);
  const double tail = mono - osc;

  return 4.0 * (head + mid + tail);
}

struct FracIdentityResult {
  double lhs = 0.0;             ///< double integral of |u(y+h)-u(y)|^2 / |h|^{1+2s}
  double rhs = 0.0;             ///< C_* || |D|^s u ||^2
  double c_star = 0.0;
  double relative_error = 0.0;
  bool decayed = true;          ///< false when the slice carries mass near its ends
};

namespace detail {

// Integral over [a, b] of h^{q} * P(h), P the cubic through (nodes[k], vals[k]).
inline double product_integral_cubic(const std::array<double, 4>& nodes, const std::array<double, 4>& vals,
                                     double a, double b, double q) {
  // Newton form -> monomial coefficients about 0.
  std::array<double, 4> dd = vals;
  for (int lvl = 1; lvl < 4; ++lvl)
    for (int k = 3; k >= lvl; --k) dd[k] = (dd[k] - dd[k - 1]) / (nodes[k] - nodes[k - lvl]);
  std::array<double, 4> poly{dd[3], 0.0, 0.0, 0.0};  // Horner build, poly[d] = coeff of h^d
  int deg = 0;
  for (int k = 2; k >= 0; --k) {
    // poly <- poly * (h - nodes[k]) + dd[k]
    std::array<double, 4> next{};
    for (int d = deg; d >= 0; --d) {
      next[d + 1] += poly[d];
      next[d] -= poly[d] * nodes[k];
    }
    next[0] += dd[k];
    poly = next;
    ++deg;
  }
  double acc = 0.0;
  for (int d = 0; d < 4; ++d) {
    const double e = d + q + 1.0;
    acc += poly[d] * (std::pow(b, e) - (a > 0.0 ? std::pow(a, e) : 0.0)) / e;
  }
  return acc;
}

}  // namespace detail

/// Checks  double-integral seminorm == C_* || |D_y|^s u ||^2  on a 1-D slice.
///
/// u holds samples on a uniform grid with spacing dy (ly = n dy) and is treated
/// as a function on the line, zero outside the slice. The double integral is
/// evaluated in physical space: the y-integral exactly on integer shifts, the
/// h-integral (|h| <= ly/2) by cubic product integration against h^{1-2s},
/// plus the closed-form far field 2 ||u||^2 integral_{|h|>ly/2} |h|^{-1-2s} dh.
/// The right side uses the spectral norm on an 8x zero-padded box.
inline FracIdentityResult frac_seminorm_identity_check(std::span<const std::complex<double>> u, double dy,
                                                       double s) {
  require(s > 0.0 && s < 1.0, "fractional order must lie in (0, 1)");
  require(u.size() >= 16 && dy > 0.0, "slice too short");
  const std::size_t n = u.size();
  const double ly = dy * static_cast<double>(n);
  FracIdentityResult out;
  out.c_star = frac_constant(s);

  double mass = 0.0, edge = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(u[j]);
    mass += w;
    if (j < n / 10 || j >= n - n / 10) edge += w;
  }
  mass *= dy;
  edge *= dy;
  out.decayed = mass == 0.0 || edge <= 1e-8 * mass;
  if (mass == 0.0) return out;

  const std::size_t half = n / 2;
  // F(m dy) / (m dy)^2 for m = 1..half
  std::vector<double> g(half + 1, 0.0);
  for (std::size_t m = 1; m <= half; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::complex<double> shifted = (j + m < n) ? u[j + m] : std::complex<double>{};
      acc += std::norm(shifted - u[j]);
    }
    // lattice points left of the slice, where u(y) = 0 but u(y + h) is not
    for (std::size_t k = 0; k < m && k < n; ++k) acc += std::norm(u[k]);
    const double h = static_cast<double>(m) * dy;
    g[m] = acc * dy / (h * h);
  }

  const double q = 1.0 - 2.0 * s;
  double near = 0.0;
  for (std::size_t panel = 0; panel < half; ++panel) {
    // nodes panel-1 .. panel+2 clipped into [1, half]
    std::size_t first = panel == 0 ? 1 : panel - 1;
    if (first + 3 > half) first = half - 3;
    std::array<double, 4> nodes{}, vals{};
    for (int k = 0; k < 4; ++k) {
      nodes[k] = static_cast<double>(first + k) * dy;
      vals[k] = g[first + k];
    }
    near += detail::product_integral_cubic(nodes, vals, panel * dy, (panel + 1) * dy, q);
  }
  const double hmax = static_cast<double>(half) * dy;
  const double far = 2.0 * mass * 2.0 * std::pow(hmax, -2.0 * s) / (2.0 * s);
  out.lhs = 2.0 * near + far;

  constexpr std::size_t pad = 8;
  std::vector<std::complex<double>> padded(n * pad);
  for (std::size_t j = 0; j < n; ++j) padded[j] = u[j];
  const auto c = fft::coefficients_1d(padded);
  const double lpad = ly * static_cast<double>(pad);
  double seminorm = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k == c.size() / 2) continue;  // Nyquist: no sign, zero content for resolved data
    auto idx = static_cast<double>(k);
    if (k > c.size() / 2) idx -= static_cast<double>(c.size());
    const double eta = 2.0 * std::numbers::pi * std::abs(idx) / lpad;
    if (eta > 0.0) seminorm += std::pow(eta, 2.0 * s) * std::norm(c[k]);
  }
  seminorm *= lpad;
  out.rhs = out.c_star * seminorm;
  out.relative_error = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-300);
  return out;
}

}  // namespace hwlab
