#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <variant>

#include "hwlab/field.hpp"

namespace hwlab {

namespace symbols {

/// d^2/dx^2  ->  -xi^2
struct Dxx {};
/// |D_y|  ->  |eta|
struct AbsDy {};
/// |D_y|^s  ->  |eta|^s, s in (0, 1]
struct FracDy {
  double s;
};
/// Quadratic-form symbol of the velocity term: -v eta (zero on the Nyquist eta mode).
struct Transport {
  double v;
};
/// exp(i t (d_xx - |D_y|))  ->  exp(i t (-xi^2 - |eta|))
struct HalfwaveGroup {
  double t;
};
/// xi^2 + |eta| - v eta + omega
struct ActionQuadratic {
  double omega;
  double v = 0.0;
};

}  // namespace symbols

using Symbol = std::variant<symbols::Dxx, symbols::AbsDy, symbols::FracDy, symbols::Transport,
                            symbols::HalfwaveGroup, symbols::ActionQuadratic>;

inline void validate(const Symbol& s) {
  if (const auto* f = std::get_if<symbols::FracDy>(&s))
    require(f->s > 0.0 && f->s <= 1.0, "frac_dy order must lie in (0, 1], got " + std::to_string(f->s));
}

/// Value of the multiplier at mode (xi, eta). Odd-in-eta pieces vanish on the Nyquist eta mode.
inline cplx symbol_value(const Symbol& sym, double xi, double eta, bool eta_nyquist) {
  return std::visit(
      [&](const auto& s) -> cplx {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, symbols::Dxx>) {
          return -xi * xi;
        } else if constexpr (std::is_same_v<T, symbols::AbsDy>) {
          return std::abs(eta);
        } else if constexpr (std::is_same_v<T, symbols::FracDy>) {
          return eta == 0.0 ? 0.0 : std::pow(std::abs(eta), s.s);
        } else if constexpr (std::is_same_v<T, symbols::Transport>) {
          return eta_nyquist ? 0.0 : -s.v * eta;
        } else if constexpr (std::is_same_v<T, symbols::HalfwaveGroup>) {
          return std::polar(1.0, -s.t * (xi * xi + std::abs(eta)));
        } else {
          const double transport = eta_nyquist ? 0.0 : -s.v * eta;
          return xi * xi + std::abs(eta) + transport + s.omega;
        }
      },
      sym);
}

/// Multiply spectral coefficients by m(xi, eta, i, j); returns in the caller's representation.
template <class M>
Field apply_multiplier(const Field& f, M&& m) {
  const Representation rep = f.representation();
  Field s = to_spectral(f);
  const Grid& g = s.grid();
  const auto& xi = g.xi();
  const auto& eta = g.eta();
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) s(i, j) *= m(xi[i], eta[j], i, j);
  return in_representation(std::move(s), rep);
}

inline Field apply_symbol(const Field& f, const Symbol& sym) {
  validate(sym);
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](double xi, double eta, std::size_t, std::size_t j) {
    return symbol_value(sym, xi, eta, g.is_nyquist_y(j));
  });
}

/// Spectral d/dx (i xi), zero on the Nyquist xi mode.
inline Field dx(const Field& f) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](double xi, double, std::size_t i, std::size_t) {
    return g.is_nyquist_x(i) ? cplx{} : cplx(0.0, xi);
  });
}

/// Spectral d/dy (i eta), zero on the Nyquist eta mode.
inline Field dy(const Field& f) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](double, double eta, std::size_t, std::size_t j) {
    return g.is_nyquist_y(j) ? cplx{} : cplx(0.0, eta);
  });
}

/// Real quadratic form <m(D) u, u> for a real symbol m; evaluated spectrally.
template <class M>
double quadratic_form(const Field& u, M&& m) {
  const Field s = to_spectral(u);
  const Grid& g = s.grid();
  const auto& xi = g.xi();
  const auto& eta = g.eta();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) acc += m(xi[i], eta[j], i, j) * std::norm(s(i, j));
  return acc * g.area();
}

}  // namespace hwlab
