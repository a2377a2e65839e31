#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hwlab/field.hpp"
#include "hwlab/symbol.hpp"

namespace hwlab {

/// Model parameters: nonlinearity power p, frequency omega, velocity v.
struct ModelParams {
  double p = 2.0;
  double omega = 1.0;
  double v = 0.0;

  /// Cauchy-theory range: 1 < p <= 5, omega > 0, |v| < 1.
  void validate() const {
    require(p > 1.0 && p <= 5.0, "p must lie in (1, 5], got " + std::to_string(p));
    require(omega > 0.0, "omega must be positive");
    require(std::abs(v) < 1.0, "velocity must satisfy |v| < 1, got " + std::to_string(v));
  }
  /// Variational solvers additionally need p < 5.
  void validate_variational() const {
    validate();
    require(p < 5.0, "variational problems need 1 < p < 5");
  }

  /// Critical regularity s_p = 3/2 - 2/(p-1); zero at the L2-critical p = 7/3.
  double s_p() const { return 1.5 - 2.0 / (p - 1.0); }
};

inline constexpr double kL2CriticalPower = 7.0 / 3.0;

struct FunctionalReport {
  double mass = 0.0;
  double hamiltonian = 0.0;
  double action = 0.0;
  double nehari = 0.0;
  double i_value = 0.0;
  double x_norm = 0.0;
  double lp1_norm = 0.0;
  double gn_quotient = std::numeric_limits<double>::quiet_NaN();
};

// |u|^{p+1} as (|u|^2)^{(p+1)/2}; |u|^2 is nonnegative by construction but the
// clamp keeps pow away from -0 surprises.
inline double abs_pow(double abs2, double e) {
  return abs2 <= 0.0 ? 0.0 : std::pow(abs2, 0.5 * e);
}

/// ||u||_{p+1}^{p+1}
inline double potential(const Field& u, double p) {
  const Field f = to_physical(u);
  double acc = 0.0;
  for (const auto& v : f.values()) acc += abs_pow(std::norm(v), p + 1.0);
  return acc * f.grid().cell_area();
}

inline double lp_norm(const Field& u, double q) {
  const Field f = to_physical(u);
  double acc = 0.0;
  for (const auto& v : f.values()) acc += abs_pow(std::norm(v), q);
  return std::pow(acc * f.grid().cell_area(), 1.0 / q);
}

/// M(u) = ||u||^2 / 2
inline double mass(const Field& u) { return 0.5 * norm2(u); }

/// ||d_x u||^2
inline double dx_norm2(const Field& u) {
  return quadratic_form(u, [](double xi, double, std::size_t, std::size_t) { return xi * xi; });
}

/// <|D_y| u, u> = || |D_y|^{1/2} u ||^2
inline double dy_half_norm2(const Field& u) {
  return quadratic_form(u, [](double, double eta, std::size_t, std::size_t) { return std::abs(eta); });
}

/// <(|D_y| - v eta) u, u>: velocity-twisted half-wave form.
inline double twisted_dy_form(const Field& u, double v) {
  const Grid& g = u.grid();
  return quadratic_form(u, [&](double, double eta, std::size_t, std::size_t j) {
    return std::abs(eta) - (g.is_nyquist_y(j) ? 0.0 : v * eta);
  });
}

/// <(-d_xx + |D_y| - v eta + omega) u, u>
inline double quadratic_part(const Field& u, const ModelParams& mp) {
  const Grid& g = u.grid();
  return quadratic_form(u, [&](double xi, double eta, std::size_t, std::size_t j) {
    return symbol_value(symbols::ActionQuadratic{mp.omega, mp.v}, xi, eta, g.is_nyquist_y(j)).real();
  });
}

/// H(u) = (||d_x u||^2 + <|D_y|u,u>)/2 - ||u||_{p+1}^{p+1}/(p+1)
inline double hamiltonian(const Field& u, double p) {
  const double kinetic = quadratic_form(
      u, [](double xi, double eta, std::size_t, std::size_t) { return xi * xi + std::abs(eta); });
  return 0.5 * kinetic - potential(u, p) / (p + 1.0);
}

/// S_{omega,v}(u) = quadratic_part/2 - ||u||_{p+1}^{p+1}/(p+1)
inline double action(const Field& u, const ModelParams& mp) {
  return 0.5 * quadratic_part(u, mp) - potential(u, mp.p) / (mp.p + 1.0);
}

/// N_{omega,v}(u) = <S'(u), u> = quadratic_part - ||u||_{p+1}^{p+1}
inline double nehari(const Field& u, const ModelParams& mp) { return quadratic_part(u, mp) - potential(u, mp.p); }

/// I_{omega,v}(u) = S - N/(p+1) = (1/2 - 1/(p+1)) quadratic_part
inline double i_value(const Field& u, const ModelParams& mp) {
  return (0.5 - 1.0 / (mp.p + 1.0)) * quadratic_part(u, mp);
}

/// ||u||_X = (||d_x u||^2 + || |D_y|^{1/2} u||^2 + ||u||^2)^{1/2}
inline double x_norm(const Field& u) {
  return std::sqrt(quadratic_form(
      u, [](double xi, double eta, std::size_t, std::size_t) { return xi * xi + std::abs(eta) + 1.0; }));
}

/// X inner product <a, b>_X = sum (xi^2 + |eta| + 1) a^ conj(b^).
inline cplx x_inner(const Field& a, const Field& b) {
  const Field sa = to_spectral(a);
  const Field sb = to_spectral(b);
  sa.check_compatible(sb);
  const Grid& g = sa.grid();
  const auto& xi = g.xi();
  const auto& eta = g.eta();
  cplx acc{};
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j)
      acc += (xi[i] * xi[i] + std::abs(eta[j]) + 1.0) * sa(i, j) * std::conj(sb(i, j));
  return acc * g.area();
}

/// ||u||_{p+1}^{p+1} / (||d_x u||^{(p-1)/2} || |D_y|^{1/2} u||^{p-1} ||u||^{(5-p)/2})
inline double gn_quotient(const Field& u, double p) {
  const double a = std::sqrt(dx_norm2(u));
  const double b = std::sqrt(dy_half_norm2(u));
  const double c = l2_norm(u);
  const double scale = std::max(c, 1e-300);
  if (a <= 1e-14 * scale || b <= 1e-14 * scale || c == 0.0)
    throw PreconditionError("gn_quotient: a factor norm vanishes");
  return potential(u, p) / (std::pow(a, 0.5 * (p - 1.0)) * std::pow(b, p - 1.0) * std::pow(c, 0.5 * (5.0 - p)));
}

/// Zero every mode outside the central 2/3 of the spectrum in each direction.
inline Field two_thirds_filter(const Field& f) {
  const Grid& g = f.grid();
  const double kx = (2.0 / 3.0) * std::numbers::pi / g.dx();
  const double ky = (2.0 / 3.0) * std::numbers::pi / g.dy();
  return apply_multiplier(f, [&](double xi, double eta, std::size_t, std::size_t) {
    return (std::abs(xi) <= kx && std::abs(eta) <= ky) ? 1.0 : 0.0;
  });
}

/// |u|^{p-1} u in physical space, optionally 2/3-rule filtered.
inline Field nonlinear_term(const Field& u, double p, bool dealias = false) {
  Field out = pointwise(u, [p](cplx v) { return abs_pow(std::norm(v), p - 1.0) * v; });
  if (dealias) out = two_thirds_filter(out);
  return in_representation(std::move(out), u.representation());
}

/// S'(u) = (-d_xx + |D_y| - v eta + omega) u - |u|^{p-1} u, in the representation of u.
/// Real duality re<S'(u), h> is the directional derivative of S.
inline Field action_gradient(const Field& u, const ModelParams& mp, bool dealias = false) {
  Field lin = apply_symbol(u, symbols::ActionQuadratic{mp.omega, mp.v});
  lin -= nonlinear_term(u, mp.p, dealias);
  return lin;
}

/// H'(u) = (-d_xx + |D_y|) u - |u|^{p-1} u
inline Field hamiltonian_gradient(const Field& u, double p) {
  Field lin = apply_multiplier(u, [](double xi, double eta, std::size_t, std::size_t) { return xi * xi + std::abs(eta); });
  lin -= nonlinear_term(u, p);
  return lin;
}

/// Second derivative of the potential part: N'(u) h = |u|^{p-1} h + (p-1)|u|^{p-3} u re(conj(u) h).
inline Field nonlinear_derivative(const Field& u, const Field& h, double p) {
  Field uu = to_physical(u);
  Field hh = to_physical(h);
  uu.check_compatible(hh);
  Field out(uu.grid_ptr());
  for (std::size_t k = 0; k < uu.size(); ++k) {
    const double a2 = std::norm(uu[k]);
    if (a2 == 0.0) continue;
    const double r = std::real(std::conj(uu[k]) * hh[k]);
    out[k] = abs_pow(a2, p - 1.0) * hh[k] + (p - 1.0) * abs_pow(a2, p - 3.0) * uu[k] * r;
  }
  return in_representation(std::move(out), h.representation());
}

inline FunctionalReport report(const Field& u, const ModelParams& mp) {
  FunctionalReport r;
  r.mass = mass(u);
  r.hamiltonian = hamiltonian(u, mp.p);
  r.action = action(u, mp);
  r.nehari = nehari(u, mp);
  r.i_value = i_value(u, mp);
  r.x_norm = x_norm(u);
  r.lp1_norm = lp_norm(u, mp.p + 1.0);
  try {
    r.gn_quotient = gn_quotient(u, mp.p);
  } catch (const PreconditionError&) {
  }
  return r;
}

}  // namespace hwlab
