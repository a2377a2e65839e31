#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "hwlab/dilation.hpp"
#include "hwlab/functionals.hpp"

namespace hwlab {

/// Fourier multiplier together with its first partial derivatives in (xi, eta).
struct Multiplier {
  std::function<double(double, double)> value;
  std::function<double(double, double)> d_xi;
  std::function<double(double, double)> d_eta;
};

inline double sign0(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

namespace multipliers {

/// xi^2 + |eta| + omega
inline Multiplier linear_operator(double omega) {
  return {[omega](double xi, double eta) { return xi * xi + std::abs(eta) + omega; },
          [](double xi, double) { return 2.0 * xi; }, [](double, double eta) { return sign0(eta); }};
}
/// Phi_1 = 1 / (xi^2 + |eta| + omega)
inline Multiplier phi1(double omega) {
  return {[omega](double xi, double eta) { return 1.0 / (xi * xi + std::abs(eta) + omega); },
          [omega](double xi, double eta) {
            const double l = xi * xi + std::abs(eta) + omega;
            return -2.0 * xi / (l * l);
          },
          [omega](double xi, double eta) {
            const double l = xi * xi + std::abs(eta) + omega;
            return -sign0(eta) / (l * l);
          }};
}
/// Phi_2 = -xi^2 / (xi^2 + |eta| + omega)
inline Multiplier phi2(double omega) {
  return {[omega](double xi, double eta) { return -xi * xi / (xi * xi + std::abs(eta) + omega); },
          [omega](double xi, double eta) {
            const double r = std::abs(eta) + omega;
            const double l = xi * xi + r;
            return -2.0 * xi * r / (l * l);
          },
          [omega](double xi, double eta) {
            const double l = xi * xi + std::abs(eta) + omega;
            return xi * xi * sign0(eta) / (l * l);
          }};
}
/// Phi_3 = |eta| / (xi^2 + |eta| + omega)
inline Multiplier phi3(double omega) {
  return {[omega](double xi, double eta) { return std::abs(eta) / (xi * xi + std::abs(eta) + omega); },
          [omega](double xi, double eta) {
            const double l = xi * xi + std::abs(eta) + omega;
            return -2.0 * xi * std::abs(eta) / (l * l);
          },
          [omega](double xi, double eta) {
            const double l = xi * xi + std::abs(eta) + omega;
            return sign0(eta) * (xi * xi + omega) / (l * l);
          }};
}
/// d_xx  ->  -xi^2
inline Multiplier dxx() {
  return {[](double xi, double) { return -xi * xi; }, [](double xi, double) { return -2.0 * xi; },
          [](double, double) { return 0.0; }};
}
/// |D_y|  ->  |eta|
inline Multiplier abs_dy() {
  return {[](double, double eta) { return std::abs(eta); }, [](double, double) { return 0.0; },
          [](double, double eta) { return sign0(eta); }};
}

}  // namespace multipliers

/// f0 + x f1 + y f2 with periodic f_i and x, y measured from a fixed center.
///
/// Lets the non-periodic weights x, y of the scaling generator act through
/// exact commutators, m(D)(x f) = x m(D) f - i (d_xi m)(D) f, instead of being
/// sampled on the torus.
struct AffineField {
  Field f0, f1, f2;
  Centroid center;

  /// Samples on the fundamental domain |x - cx| <= lx/2, |y - cy| <= ly/2.
  Field evaluate() const {
    const Grid& g = f0.grid();
    const PeriodicCoordinate cx(g.lx(), center.x), cy(g.ly(), center.y);
    Field a = to_physical(f0), b = to_physical(f1), c = to_physical(f2);
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double x = cx.wrap(g.x(i));
      for (std::size_t j = 0; j < g.ny(); ++j) a(i, j) += x * b(i, j) + cy.wrap(g.y(j)) * c(i, j);
    }
    return a;
  }
};

inline Field apply_multiplier(const Field& f, const std::function<double(double, double)>& m) {
  return apply_multiplier(f, [&](double xi, double eta, std::size_t, std::size_t) { return m(xi, eta); });
}

inline AffineField apply(const Multiplier& m, const AffineField& a) {
  AffineField out;
  out.center = a.center;
  out.f0 = to_physical(apply_multiplier(a.f0, m.value));
  out.f0.axpy(cplx(0.0, -1.0), to_physical(apply_multiplier(a.f1, m.d_xi)));
  out.f0.axpy(cplx(0.0, -1.0), to_physical(apply_multiplier(a.f2, m.d_eta)));
  out.f1 = to_physical(apply_multiplier(a.f1, m.value));
  out.f2 = to_physical(apply_multiplier(a.f2, m.value));
  return out;
}

/// Pointwise product with a periodic physical-space weight.
inline AffineField multiply(const Field& w, const AffineField& a) {
  auto mul = [&](const Field& f) {
    Field out = to_physical(f);
    const Field wp = to_physical(w);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= wp[k];
    return out;
  };
  return {mul(a.f0), mul(a.f1), mul(a.f2), a.center};
}

inline AffineField operator-(AffineField a, const AffineField& b) {
  a.f0 -= b.f0;
  a.f1 -= b.f1;
  a.f2 -= b.f2;
  return a;
}

/// R_1 = Q/(p-1) + (x d_x Q)/2 + y d_y Q about the centroid of Q.
inline AffineField r1_field(const Field& q, double p) {
  const Field qp = to_physical(q);
  AffineField r;
  r.center = centroid(qp);
  r.f0 = qp;
  r.f0 *= 1.0 / (p - 1.0);
  r.f1 = to_physical(dx(qp));
  r.f1 *= 0.5;
  r.f2 = to_physical(dy(qp));
  return r;
}

struct R1Diagnostics {
  Field r1;                           ///< R_1 on the fundamental domain
  double linearized_residual = 0.0;   ///< ||L R_1 - p Q^{p-1} R_1 + Q|| / ||Q||
  double multiplier_roundtrip_error = 0.0;  ///< ||R_1 - Phi_1(L R_1)|| / ||R_1||
  double phi2_roundtrip_error = 0.0;  ///< ||d_xx R_1 - Phi_2(L R_1)|| / ||d_xx R_1||
  double phi3_roundtrip_error = 0.0;  ///< || |D_y| R_1 - Phi_3(L R_1)|| / |||D_y| R_1||
  double equation_reconstruction_error = 0.0;  ///< ||R_1 - Phi_1(P)|| / ||R_1||, P = -Q + p Q^{p-1} R_1
  double tail_mass_fraction = 0.0;
  bool below_supercritical_range = false;  ///< p <= 7/3: R_1 in X is not asserted there
};

/// Diagnostics for the linearized ground-state equation at omega = 1.
inline R1Diagnostics r1_diagnostics(const Field& q1, double p) {
  require(p > 1.0 && p < 5.0, "r1_diagnostics needs 1 < p < 5");
  const double omega = 1.0;
  R1Diagnostics out;
  out.below_supercritical_range = p <= kL2CriticalPower;
  out.tail_mass_fraction = tail_mass_fraction(q1);

  const Field q = to_physical(q1);
  const AffineField r = r1_field(q, p);
  const Field weight = pointwise(q, [p](cplx v) { return cplx(p * abs_pow(std::norm(v), p - 1.0)); });

  const AffineField lr = apply(multipliers::linear_operator(omega), r);
  AffineField defect = lr - multiply(weight, r);
  defect.f0 += q;
  out.r1 = r.evaluate();
  out.linearized_residual = l2_norm(defect.evaluate()) / l2_norm(q);

  const double r1n = l2_norm(out.r1);
  out.multiplier_roundtrip_error = l2_norm(apply(multipliers::phi1(omega), lr).evaluate() - out.r1) / r1n;
  const Field dxx_r = apply(multipliers::dxx(), r).evaluate();
  out.phi2_roundtrip_error = l2_norm(apply(multipliers::phi2(omega), lr).evaluate() - dxx_r) / l2_norm(dxx_r);
  const Field dy_r = apply(multipliers::abs_dy(), r).evaluate();
  out.phi3_roundtrip_error = l2_norm(apply(multipliers::phi3(omega), lr).evaluate() - dy_r) / l2_norm(dy_r);

  AffineField pe = multiply(weight, r);
  pe.f0 -= q;
  out.equation_reconstruction_error = l2_norm(apply(multipliers::phi1(omega), pe).evaluate() - out.r1) / r1n;
  return out;
}

struct MultiplierBounds {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
};

/// Largest |Phi_i| over the grid modes.
inline MultiplierBounds multiplier_bounds(const Grid& g, double omega) {
  require(omega > 0.0, "omega must be positive");
  MultiplierBounds b;
  const auto m1 = multipliers::phi1(omega), m2 = multipliers::phi2(omega), m3 = multipliers::phi3(omega);
  for (double xi : g.xi())
    for (double eta : g.eta()) {
      b.phi1 = std::max(b.phi1, std::abs(m1.value(xi, eta)));
      b.phi2 = std::max(b.phi2, std::abs(m2.value(xi, eta)));
      b.phi3 = std::max(b.phi3, std::abs(m3.value(xi, eta)));
    }
  return b;
}

}  // namespace hwlab
