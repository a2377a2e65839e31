#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hwlab/dilation.hpp"
#include "hwlab/functionals.hpp"

namespace hwlab {

struct SolitarySolution {
  ModelParams params;
  Field q;
  double action_value = 0.0;       ///< S_{omega,v}(q), an upper bound for m_{omega,v}
  double nehari_residual = 0.0;    ///< N_{omega,v}(q)
  double quadratic = 0.0;          ///< quadratic part of S at q
  double gradient_residual = 0.0;  ///< ||S'(q)||
  double relative_gradient = 0.0;  ///< ||S'(q)|| / ||q||
  int iterations = 0;
  double tail_mass_fraction = 0.0;
  bool converged = false;
  std::vector<double> action_history;  ///< S after each accepted step
};

struct MassMinimizer {
  double mu = 0.0;
  Field u;
  double energy = 0.0;            ///< H(u), estimate of I(mu)
  double omega_multiplier = 0.0;  ///< -re<H'(u), u> / (2 mu)
  double relative_gradient = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;
};

struct SolverOptions {
  double tol = 1e-9;  ///< stop when ||S'(u)|| <= tol ||u||
  int max_iter = 5000;
  double armijo = 1e-4;
};

/// Separable Gaussian exp(-x^2/wx^2 - y^2/wy^2); widths 2 and 4 by default.
inline Field gaussian_init(const GridPtr& g, double wx = 2.0, double wy = 4.0, double amplitude = 1.0) {
  return Field::from_function(g, [&](double x, double y) {
    return amplitude * std::exp(-(x * x) / (wx * wx) - (y * y) / (wy * wy));
  });
}

/// Gaussian modulated by e^{i eta0 y}, eta0 the lowest positive y frequency.
inline Field traveling_init(const GridPtr& g, double wx = 2.0, double wy = 4.0) {
  const double eta0 = 2.0 * std::numbers::pi / g->ly();
  return Field::from_function(g, [&](double x, double y) {
    return std::exp(-(x * x) / (wx * wx) - (y * y) / (wy * wy)) * std::polar(1.0, eta0 * y);
  });
}

/// t u with t = (quadratic/potential)^{1/(p-1)}, the unique ray point on the Nehari manifold.
inline Field nehari_project(const Field& u, const ModelParams& mp) {
  const double a = quadratic_part(u, mp);
  const double b = potential(u, mp.p);
  if (!(b > 0.0) || !std::isfinite(a / b) || a / b > 1e300)
    throw NumericalError("Nehari projection collapsed: potential term vanished");
  Field out = u;
  out *= std::pow(a / b, 1.0 / (mp.p - 1.0));
  return out;
}

namespace detail {

// Apply 1/(xi^2 + |eta| - v eta + c) to f.
inline Field precondition(const Field& f, double c, double v) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](double xi, double eta, std::size_t, std::size_t j) {
    const double t = g.is_nyquist_y(j) ? 0.0 : -v * eta;
    return 1.0 / (xi * xi + std::abs(eta) + t + c);
  });
}

inline double rel_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Global phase making the largest-modulus sample real positive.
inline Field fix_phase(Field u) {
  Field f = to_physical(std::move(u));
  std::size_t best = 0;
  for (std::size_t k = 1; k < f.size(); ++k)
    if (std::abs(f[k]) > std::abs(f[best])) best = k;
  if (std::abs(f[best]) > 0.0) f *= std::polar(1.0, -std::arg(f[best]));
  return f;
}

}  // namespace detail

/// Minimize S_{omega,v} on the Nehari manifold.
///
/// Preconditioned gradient descent in the X metric (step direction
/// (xi^2 + |eta| - v eta + omega)^{-1} S'(u)), each trial point projected back
/// onto the manifold, Armijo backtracking on S. A trial is also accepted when S
/// is flat to rounding but the residual still falls.
inline SolitarySolution solve_nehari(const ModelParams& mp, const GridPtr& grid, const Field& init,
                                     const SolverOptions& opt = {}) {
  mp.validate_variational();
  require(init.same_grid(Field(grid)), "solve_nehari: init lives on a different grid");
  require(l2_norm(init) > 0.0, "solve_nehari: init must be nonzero");

  SolitarySolution sol;
  sol.params = mp;
  Field u = nehari_project(to_physical(init), mp);
  double s_val = action(u, mp);
  Field g = action_gradient(u, mp);
  double res = l2_norm(g) / l2_norm(u);
  double step = 1.0;
  int it = 0;
  for (; it < opt.max_iter && res > opt.tol; ++it) {
    const Field d = detail::precondition(g, mp.omega, mp.v);
    const double slope = std::real(inner(g, d));
    bool accepted = false;
    Field next;
    double s_next = s_val;
    for (int bt = 0; bt < 60; ++bt) {
      Field trial = u;
      trial.axpy(-step, d);
      trial = nehari_project(trial, mp);
      const double s_trial = action(trial, mp);
      if (s_trial <= s_val - opt.armijo * step * slope) {
        accepted = true;
      } else if (s_trial - s_val <= 4e-14 * std::abs(s_val)) {
        accepted = l2_norm(action_gradient(trial, mp)) / l2_norm(trial) < res;
      }
      if (accepted) {
        next = std::move(trial);
        s_next = s_trial;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no admissible step: rounding floor reached
    u = std::move(next);
    s_val = s_next;
    sol.action_history.push_back(s_val);
    g = action_gradient(u, mp);
    res = l2_norm(g) / l2_norm(u);
    step = std::min(1.0, 2.0 * step);
  }

  if (mp.v == 0.0) {
    u = detail::fix_phase(std::move(u));
    g = action_gradient(u, mp);
  }
  sol.q = u;
  sol.iterations = it;
  sol.action_value = action(u, mp);
  sol.nehari_residual = nehari(u, mp);
  sol.quadratic = quadratic_part(u, mp);
  sol.gradient_residual = l2_norm(g);
  sol.relative_gradient = sol.gradient_residual / l2_norm(u);
  sol.tail_mass_fraction = tail_mass_fraction(u);
  sol.converged = sol.relative_gradient <= opt.tol;
  return sol;
}

/// Minimize H on the sphere M(u) = mu (normalized gradient flow with X-metric preconditioning).
inline MassMinimizer solve_mass_constrained(double mu, double p, const GridPtr& grid, const Field& init,
                                            const SolverOptions& opt = {}) {
  require(p > 1.0 && p < kL2CriticalPower, "mass-constrained minimization needs 1 < p < 7/3 (got p = " +
                                                std::to_string(p) + ")");
  require(mu > 0.0, "mass must be positive");
  require(init.same_grid(Field(grid)), "solve_mass_constrained: init lives on a different grid");
  require(l2_norm(init) > 0.0, "solve_mass_constrained: init must be nonzero");

  auto normalize = [mu](Field f) {
    const double m = mass(f);
    if (!(m > 0.0) || !std::isfinite(m)) throw NumericalError("mass-constrained flow collapsed");
    f *= std::sqrt(mu / m);
    return f;
  };
  MassMinimizer out;
  out.mu = mu;
  Field u = normalize(to_physical(init));
  double h = hamiltonian(u, p);

  auto tangent_gradient = [&](const Field& w, double& omega) {
    Field hg = hamiltonian_gradient(w, p);
    omega = -std::real(inner(hg, w)) / norm2(w);
    hg.axpy(omega, w);
    return hg;
  };
  double omega = 0.0;
  Field g = tangent_gradient(u, omega);
  double res = l2_norm(g) / l2_norm(u);
  double step = 1.0;
  int it = 0;
  for (; it < opt.max_iter && res > opt.tol; ++it) {
    Field d = detail::precondition(g, std::max(omega, 1e-3), 0.0);
    d.axpy(-std::real(inner(d, u)) / norm2(u), u);
    const double slope = std::real(inner(g, d));
    bool accepted = false;
    Field next;
    double h_next = h;
    for (int bt = 0; bt < 60; ++bt) {
      Field trial = u;
      trial.axpy(-step, d);
      trial = normalize(std::move(trial));
      const double h_trial = hamiltonian(trial, p);
      if (h_trial <= h - opt.armijo * step * slope) {
        accepted = true;
      } else if (h_trial - h <= 4e-14 * std::abs(h)) {
        double om;
        const double rt = l2_norm(tangent_gradient(trial, om)) / l2_norm(trial);
        accepted = rt < res;
      }
      if (accepted) {
        next = std::move(trial);
        h_next = h_trial;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    u = std::move(next);
    h = h_next;
    out.energy_history.push_back(h);
    g = tangent_gradient(u, omega);
    res = l2_norm(g) / l2_norm(u);
    step = std::min(1.0, 2.0 * step);
  }
  out.u = detail::fix_phase(std::move(u));
  out.energy = hamiltonian(out.u, p);
  out.omega_multiplier = -std::real(inner(hamiltonian_gradient(out.u, p), out.u)) / (2.0 * mu);
  out.relative_gradient = res;
  out.iterations = it;
  out.converged = res <= opt.tol;
  return out;
}

/// Q_omega(x, y) = omega^{1/(p-1)} Q_1(sqrt(omega) x, omega y), sampled on the box (lx/sqrt(omega), ly/omega).
inline Field rescale_omega(const Field& q1, double omega, double p) {
  require(omega > 0.0, "omega must be positive");
  require(p > 1.0, "p must exceed 1");
  if (omega == 1.0) return q1;
  const Grid& g = q1.grid();
  auto grid = make_grid(g.nx(), g.ny(), g.lx() / std::sqrt(omega), g.ly() / omega);
  Field out(grid, std::vector<cplx>(q1.values().begin(), q1.values().end()), q1.representation());
  out *= std::pow(omega, 1.0 / (p - 1.0));
  return out;
}

/// Coefficient c(p) with d^2/dlambda^2 S(T_lambda u)|_{lambda=1} = c(p) ||u||_{p+1}^{p+1}.
inline double second_variation_coefficient(double p) {
  return -3.0 * (p - 1.0) * (3.0 * p - 7.0) / (16.0 * (p + 1.0));
}

struct SecondVariation {
  double analytic = 0.0;  ///< c(p) ||q||_{p+1}^{p+1}
  double numeric = 0.0;   ///< central second difference of lambda -> S(T_lambda q), exact dilation
  double numeric_flow = std::numeric_limits<double>::quiet_NaN();  ///< same, fixed-grid dilation flow
  double relative_error = 0.0;
};

inline SecondVariation second_variation_scaling(const Field& q, const ModelParams& mp, double eps = 1e-3,
                                                bool with_flow = false) {
  require(mp.v == 0.0, "second variation along T_lambda is defined for v = 0");
  SecondVariation out;
  out.analytic = second_variation_coefficient(mp.p) * potential(q, mp.p);
  const double s0 = action(q, mp);
  out.numeric =
      (action(t_lambda_rescaled(q, 1.0 + eps), mp) - 2.0 * s0 + action(t_lambda_rescaled(q, 1.0 - eps), mp)) /
      (eps * eps);
  if (with_flow)
    out.numeric_flow = (action(t_lambda(q, 1.0 + eps), mp) - 2.0 * s0 + action(t_lambda(q, 1.0 - eps), mp)) /
                       (eps * eps);
  out.relative_error = std::abs(out.numeric - out.analytic) / std::max(std::abs(out.analytic), 1e-300);
  return out;
}

/// lambda -> S(T_lambda q) on the given lambda values (exact discrete dilation).
inline std::vector<double> scaling_profile(const Field& q, const ModelParams& mp, const std::vector<double>& lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) out.push_back(action(t_lambda_rescaled(q, l), mp));
  return out;
}

/// re<S'_omega(u), psi(u)>: derivative of S along the scaling direction at u.
inline double scaling_pairing(const Field& u, const ModelParams& mp) {
  require(mp.v == 0.0, "scaling_pairing is defined for v = 0");
  const Field g = action_gradient(to_physical(u), mp);
  return std::real(inner(g, to_physical(psi_omega(u))));
}

/// Concentrating test family phi_lambda(x, y) = lambda phi(x, lambda^3 y) at v = 1 - lambda^{-3}.
/// Sampled exactly on the box (lx, ly / lambda^3).
struct TravelingTestPoint {
  double lambda = 0.0;
  double v = 0.0;
  double i_value = 0.0;
  double nehari = 0.0;
  double action = 0.0;
};

inline TravelingTestPoint traveling_test_point(const Field& phi, double lambda, double omega, double p) {
  require(lambda > 1.0, "lambda must exceed 1");
  const Grid& g = phi.grid();
  constexpr double alpha = 3.0;
  const double la = std::pow(lambda, alpha);
  auto grid = make_grid(g.nx(), g.ny(), g.lx(), g.ly() / la);
  Field f(grid, std::vector<cplx>(phi.values().begin(), phi.values().end()), phi.representation());
  f *= lambda;
  TravelingTestPoint out;
  out.lambda = lambda;
  out.v = 1.0 - 1.0 / la;
  const ModelParams mp{p, omega, out.v};
  out.i_value = i_value(f, mp);
  out.nehari = nehari(f, mp);
  out.action = action(f, mp);
  return out;
}

/// Smooth profile with spectrum on eta > 0 only (Nyquist excluded): Gaussian envelope in
/// x times a positive-frequency Gaussian packet in y.
inline Field positive_frequency_profile(const GridPtr& g, double eta_center = 2.0, double eta_width = 0.7) {
  const Grid& gr = *g;
  const Field env = to_spectral(gaussian_init(g, 1.5, 1.0));
  Field f(g, Representation::spectral);
  for (std::size_t i = 0; i < gr.nx(); ++i)
    for (std::size_t j = 0; j < gr.ny(); ++j) {
      const double eta = gr.eta()[j];
      if (!(eta > 0.0) || gr.is_nyquist_y(j)) continue;
      const double z = (eta - eta_center) / eta_width;
      // env(i, 0) carries the x profile; the phase centers the packet at y = 0
      f(i, j) = env(i, 0) * std::exp(-0.5 * z * z) * std::polar(1.0, -0.5 * eta * gr.ly());
    }
  return to_physical(f);
}

}  // namespace hwlab
