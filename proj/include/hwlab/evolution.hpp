#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hwlab/functionals.hpp"
#include "hwlab/orbit.hpp"

namespace hwlab {

/// S(t) u = exp(i t (d_xx - |D_y|)) u
inline Field linear_propagate(const Field& u, double t) { return apply_symbol(u, symbols::HalfwaveGroup{t}); }

/// Exact flow of i u_t = -sign |u|^{p-1} u over time tau: u exp(i sign tau |u|^{p-1}).
/// sign = +1 is the focusing equation.
inline void nonlinear_phase_inplace(Field& u, double tau, double p, double sign = 1.0) {
  require(u.is_physical(), "nonlinear phase acts on physical samples");
  for (auto& v : u.values()) v *= std::polar(1.0, sign * tau * abs_pow(std::norm(v), p - 1.0));
}

/// One Strang step: half nonlinear phase, S(dt), half nonlinear phase.
inline Field strang_step(const Field& u, double dt, double p, double sign = 1.0) {
  require(dt > 0.0, "time step must be positive");
  const Representation rep = u.representation();
  Field w = to_physical(u);
  nonlinear_phase_inplace(w, 0.5 * dt, p, sign);
  w = to_physical(linear_propagate(w, dt));
  nonlinear_phase_inplace(w, 0.5 * dt, p, sign);
  return in_representation(std::move(w), rep);
}

/// Repeated Strang steps with merged inner half-phases and a cached linear symbol.
class StrangIntegrator {
 public:
  StrangIntegrator(const GridPtr& grid, double dt, double p, double sign = 1.0)
      : grid_(grid), dt_(dt), p_(p), sign_(sign), group_(grid->size()) {
    require(dt != 0.0 && std::isfinite(dt), "time step must be nonzero and finite");
    const Grid& g = *grid;
    const double inv = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < g.nx(); ++i)
      for (std::size_t j = 0; j < g.ny(); ++j)
        group_[i * g.ny() + j] = inv * std::polar(1.0, -dt * (g.xi()[i] * g.xi()[i] + std::abs(g.eta()[j])));
  }

  /// Advance u (physical) by n steps. Negative dt runs the composition backwards.
  void advance(Field& u, std::size_t n) const {
    if (n == 0) return;
    require(u.is_physical(), "integrator state must be physical");
    const Grid& g = *grid_;
    nonlinear_phase_inplace(u, 0.5 * dt_, p_, sign_);
    for (std::size_t k = 0; k < n; ++k) {
      fft::dft2(u.values(), g.nx(), g.ny(), fft::Sign::forward);
      for (std::size_t m = 0; m < u.size(); ++m) u[m] *= group_[m];
      fft::dft2(u.values(), g.nx(), g.ny(), fft::Sign::backward);
      nonlinear_phase_inplace(u, (k + 1 == n ? 0.5 : 1.0) * dt_, p_, sign_);
    }
  }

  double dt() const { return dt_; }

 private:
  GridPtr grid_;
  double dt_, p_, sign_;
  std::vector<cplx> group_;
};

/// || (1 + eta^2)^{s/2} u ||: the L^2_x H^s_y norm.
inline double l2x_hsy_norm(const Field& u, double s) {
  return std::sqrt(quadratic_form(u, [s](double, double eta, std::size_t, std::size_t) {
    return std::pow(1.0 + eta * eta, s);
  }));
}

struct EvolveOptions {
  double p = 2.0;
  double T = 1.0;
  double dt = 1e-3;
  std::size_t sample_stride = 10;
  double s_monitor = 0.6;
  double sign = 1.0;                 ///< +1 focusing, -1 defocusing
  double max_phase_per_step = 0.5;   ///< require dt * max|symbol| <= this
  bool enforce_step_limit = true;
  double blowup_factor = 1e6;        ///< heuristic: monitor growth that declares blow-up
  double hamiltonian_tolerance = 1e-4;
  double mass_tolerance = 1e-6;
  std::optional<Field> orbit_reference;  ///< q for orbital distance sampling
  std::function<void(double, const Field&)> on_sample;  ///< extra per-sample observer
};

struct EvolutionTrace {
  std::string scheme = "strang";
  double dt = 0.0;
  std::size_t sample_stride = 0;
  std::vector<double> times;
  std::vector<double> mass_series;
  std::vector<double> hamiltonian_series;
  std::vector<double> l2x_hsy_series;
  std::vector<double> linf_series;
  std::vector<double> orbital_distance_series;
  std::vector<double> theta_series;
  std::vector<double> tau1_series;
  std::vector<double> tau2_series;
  bool blowup = false;               ///< heuristic criterion tripped
  bool hamiltonian_drift_exceeded = false;
  bool mass_drift_flag = false;
  bool aborted = false;
  std::string abort_reason;
  Field final_state;

  double max_mass_drift() const { return max_rel_drift(mass_series); }
  double max_hamiltonian_drift() const { return max_rel_drift(hamiltonian_series); }

  /// (int_0^t ||u||_inf^4 dt)^{1/4} over the samples, trapezoid rule
  double l4_linf_norm() const {
    double acc = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k)
      acc += 0.5 * (times[k] - times[k - 1]) * (std::pow(linf_series[k], 4) + std::pow(linf_series[k - 1], 4));
    return std::pow(acc, 0.25);
  }

  static double max_rel_drift(const std::vector<double>& s) {
    if (s.empty()) return 0.0;
    const double ref = std::abs(s.front());
    double m = 0.0;
    for (double v : s) m = std::max(m, std::abs(v - s.front()));
    return ref > 0.0 ? m / ref : m;
  }
};

/// Strang evolution of the focusing equation with conservation and orbit monitors.
inline EvolutionTrace evolve(const Field& u0, const EvolveOptions& opt) {
  require(opt.T > 0.0, "final time must be positive");
  require(opt.dt > 0.0 && std::isfinite(opt.dt), "time step must be positive");
  require(opt.sample_stride > 0, "sample stride must be positive");
  const Grid& g = u0.grid();
  if (opt.enforce_step_limit)
    require(opt.dt * g.max_linear_rate() <= opt.max_phase_per_step * (1.0 + 1e-12),
            "time step does not resolve the fastest linear phase (dt * max|symbol| = " +
                std::to_string(opt.dt * g.max_linear_rate()) + ")");
  const auto n_steps = static_cast<std::size_t>(std::llround(opt.T / opt.dt));
  require(n_steps > 0 && std::abs(n_steps * opt.dt - opt.T) <= 1e-9 * opt.T, "T must be a multiple of dt");
  require(n_steps % opt.sample_stride == 0, "T / dt must be a multiple of the sample stride");
  if (opt.orbit_reference) require(opt.orbit_reference->same_grid(u0), "orbit reference lives on another grid");

  EvolutionTrace tr;
  tr.dt = opt.dt;
  tr.sample_stride = opt.sample_stride;
  Field u = to_physical(u0);
  const StrangIntegrator step(u.grid_ptr(), opt.dt, opt.p, opt.sign);

  auto sample = [&](double t) {
    tr.times.push_back(t);
    tr.mass_series.push_back(mass(u));
    const double kinetic = quadratic_form(
        u, [](double xi, double eta, std::size_t, std::size_t) { return xi * xi + std::abs(eta); });
    tr.hamiltonian_series.push_back(0.5 * kinetic - opt.sign * potential(u, opt.p) / (opt.p + 1.0));
    tr.l2x_hsy_series.push_back(l2x_hsy_norm(u, opt.s_monitor));
    tr.linf_series.push_back(linf_norm(u));
    if (opt.orbit_reference) {
      const OrbitFit f = orbital_fit(u, *opt.orbit_reference);
      tr.orbital_distance_series.push_back(f.distance);
      tr.theta_series.push_back(f.theta);
      tr.tau1_series.push_back(f.tau1);
      tr.tau2_series.push_back(f.tau2);
    }
    if (opt.on_sample) opt.on_sample(t, u);
  };
  auto check = [&]() -> bool {
    for (const auto& v : u.values())
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        tr.aborted = true;
        tr.abort_reason = "non-finite values at t = " + std::to_string(tr.times.back());
        return false;
      }
    const double m0 = tr.mass_series.front();
    if (std::abs(tr.mass_series.back() - m0) > opt.mass_tolerance * std::max(m0, 1e-300)) tr.mass_drift_flag = true;
    const double h0 = tr.hamiltonian_series.front();
    const double hd = std::abs(tr.hamiltonian_series.back() - h0);
    if (hd > opt.hamiltonian_tolerance * std::max(std::abs(h0), 1e-300) && hd > 1e-300) {
      tr.hamiltonian_drift_exceeded = true;
      tr.aborted = true;
      tr.abort_reason = "Hamiltonian drift above tolerance at t = " + std::to_string(tr.times.back());
      return false;
    }
    const double n0 = tr.l2x_hsy_series.front();
    if (n0 > 0.0 && tr.l2x_hsy_series.back() > opt.blowup_factor * n0) {
      tr.blowup = true;
      tr.aborted = true;
      tr.abort_reason = "L2_x H^s_y norm exceeded blow-up threshold (heuristic) at t = " +
                        std::to_string(tr.times.back());
      return false;
    }
    return true;
  };

  sample(0.0);
  std::size_t done = 0;
  while (done < n_steps) {
    step.advance(u, opt.sample_stride);
    done += opt.sample_stride;
    sample(static_cast<double>(done) * opt.dt);
    if (!check()) break;
  }
  tr.final_state = std::move(u);
  return tr;
}

struct PicardResult {
  Field solution;                        ///< iterate at time T after the last sweep
  std::vector<double> iterate_distances;  ///< max over nodes of ||psi^{k+1} - psi^k||
  std::vector<double> ratios;             ///< successive distance ratios
  bool contraction = true;                ///< every ratio < 1
};

/// Fixed-point iteration of the discretized Duhamel formula
///   psi(t) = S(t) psi0 + i c int_0^t S(t - tau) |psi|^{p-1} psi(tau) d tau
/// with the composite trapezoid rule on n_steps uniform panels. coupling c = 1 is the
/// focusing equation, c = 0 switches the nonlinearity off.
inline PicardResult picard_solve(const Field& u0, double T, std::size_t n_steps, std::size_t n_iter, double p,
                                 double coupling = 1.0) {
  require(T > 0.0, "final time must be positive");
  require(n_steps > 0 && n_iter > 0, "need at least one panel and one sweep");
  const double h = T / static_cast<double>(n_steps);
  const Field s0 = to_spectral(u0);
  const Grid& g = s0.grid();

  std::vector<cplx> group(g.size());
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j)
      group[i * g.ny() + j] = std::polar(1.0, -h * (g.xi()[i] * g.xi()[i] + std::abs(g.eta()[j])));
  auto propagate = [&](Field& s) {
    for (std::size_t m = 0; m < s.size(); ++m) s[m] *= group[m];
  };

  // nodes held spectrally; linear iterate S(t_n) psi0
  std::vector<Field> nodes(n_steps + 1, s0);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    nodes[n] = nodes[n - 1];
    propagate(nodes[n]);
  }
  const std::vector<Field> free_flow = nodes;

  PicardResult out;
  for (std::size_t k = 0; k < n_iter; ++k) {
    std::vector<Field> nonlin(n_steps + 1);
    for (std::size_t n = 0; n <= n_steps; ++n) nonlin[n] = to_spectral(nonlinear_term(nodes[n], p));
    const cplx ic(0.0, coupling);
    Field acc(s0.grid_ptr(), Representation::spectral);  // I_0 = 0
    double dist = 0.0;
    for (std::size_t n = 0; n <= n_steps; ++n) {
      if (n > 0) {
        // I_n = S(h) I_{n-1} + h/2 (S(h) N_{n-1} + N_n)
        Field prev = nonlin[n - 1];
        propagate(prev);
        propagate(acc);
        acc.axpy(0.5 * h, prev);
        acc.axpy(0.5 * h, nonlin[n]);
      }
      Field next = free_flow[n];
      next.axpy(ic, acc);
      dist = std::max(dist, l2_norm(next - nodes[n]));
      nodes[n] = std::move(next);
    }
    if (!out.iterate_distances.empty()) {
      const double r = dist / std::max(out.iterate_distances.back(), 1e-300);
      out.ratios.push_back(r);
      if (!(r < 1.0) && out.iterate_distances.back() > 1e-14 * l2_norm(s0)) out.contraction = false;
    }
    out.iterate_distances.push_back(dist);
  }
  out.solution = to_physical(nodes.back());
  return out;
}

struct DispersiveFit {
  double exponent = 0.0;  ///< least-squares slope of log ||u(t)||_inf against log t
  std::vector<double> sup_norms;
  bool wrapped = false;   ///< boundary amplitude exceeded the threshold: fit invalid
  bool valid = false;
};

/// Sup-norm decay of e^{i t d_xx} g on a periodic line of length lx.
inline DispersiveFit dispersive_decay_probe(const std::vector<cplx>& g, double lx, const std::vector<double>& times,
                                            double boundary_threshold = 1e-6) {
  require(times.size() >= 2, "dispersive fit needs at least two times");
  require(lx > 0.0 && g.size() >= 16 && is_power_of_two(g.size()), "profile must be a power-of-two sample vector");
  double g_sup = 0.0;
  for (const auto& v : g) g_sup = std::max(g_sup, std::abs(v));
  require(g_sup > 0.0, "profile is identically zero");
  for (double t : times) require(t > 0.0, "times must be positive");

  const std::size_t n = g.size();
  const auto xi = fft_wavenumbers(n, lx);
  const auto c = fft::coefficients_1d(g);
  const std::size_t edge = std::max<std::size_t>(1, n / 20);

  DispersiveFit out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double t : times) {
    std::vector<cplx> ct(n);
    for (std::size_t k = 0; k < n; ++k) ct[k] = c[k] * std::polar(1.0, -t * xi[k] * xi[k]);
    const auto ut = fft::samples_1d(ct);
    double sup = 0.0, boundary = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sup = std::max(sup, std::abs(ut[k]));
      if (k < edge || k >= n - edge) boundary = std::max(boundary, std::abs(ut[k]));
    }
    if (boundary > boundary_threshold * sup) out.wrapped = true;
    out.sup_norms.push_back(sup);
    const double lx_ = std::log(t), ly_ = std::log(sup);
    sx += lx_;
    sy += ly_;
    sxx += lx_ * lx_;
    sxy += lx_ * ly_;
  }
  const double m = static_cast<double>(times.size());
  const double den = m * sxx - sx * sx;
  require(den > 0.0, "times must not all coincide");
  out.exponent = (m * sxy - sx * sy) / den;
  out.valid = !out.wrapped;
  return out;
}

}  // namespace hwlab
