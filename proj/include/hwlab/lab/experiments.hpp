#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hwlab/evolution.hpp"
#include "hwlab/fractional.hpp"
#include "hwlab/lab/config.hpp"
#include "hwlab/lab/csv.hpp"
#include "hwlab/lab/snapshot.hpp"
#include "hwlab/linearization.hpp"
#include "hwlab/random_fields.hpp"
#include "hwlab/solitary.hpp"

namespace hwlab::lab {

using json = nlohmann::ordered_json;

struct CommandResult {
  int exit_code = 0;
  json report;
};

inline GridPtr grid_from(const ExperimentConfig& c) {
  try {
    return make_grid(c.nx, c.ny, c.lx, c.ly);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

inline ModelParams params_from(const ExperimentConfig& c) { return {c.p, c.omega, c.v}; }

inline SolverOptions solver_from(const ExperimentConfig& c) { return {c.tol, c.max_iter, 1e-4}; }

inline std::string out_path(const ExperimentConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / name).string();
}

inline json config_json(const ExperimentConfig& c) {
  json j;
  for (const auto& k : config_keys()) j[k] = get(c, k);
  j["config_hash"] = hash_hex(config_hash(c));
  return j;
}

inline void write_report(const ExperimentConfig& c, const std::string& name, const json& report) {
  std::ofstream f(out_path(c, name));
  f << report.dump(2) << "\n";
}

/// Step size: the configured dt, or the largest T/n with dt * max|symbol| <= 0.5 and n a
/// multiple of the sample stride.
inline double step_size(const ExperimentConfig& c, const Grid& g) {
  if (c.dt > 0.0) return c.dt;
  const double rate = g.max_linear_rate();
  auto n = static_cast<std::size_t>(std::ceil(c.T * rate / 0.5));
  n = ((n + c.sample_stride - 1) / c.sample_stride) * c.sample_stride;
  return c.T / static_cast<double>(n);
}

inline EvolveOptions evolve_options(const ExperimentConfig& c, const Grid& g) {
  EvolveOptions o;
  o.p = c.p;
  o.T = c.T;
  o.dt = step_size(c, g);
  o.sample_stride = c.sample_stride;
  o.s_monitor = c.s_monitor;
  o.enforce_step_limit = c.enforce_step_limit;
  return o;
}

inline Field initial_field(const ExperimentConfig& c, const GridPtr& g) {
  if (c.init_kind == "traveling") return traveling_init(g);
  if (c.init_kind == "random") {
    Rng rng(c.seed);
    return random_smooth_field(g, rng);
  }
  if (c.init_kind == "snapshot") {
    if (c.snapshot_in.empty()) throw UsageError("solver.init_kind = snapshot needs output.snapshot_in");
    return load_snapshot(c.snapshot_in, g.get()).field;
  }
  return gaussian_init(g);
}

inline json solution_json(const SolitarySolution& s) {
  json j;
  j["p"] = s.params.p;
  j["omega"] = s.params.omega;
  j["v"] = s.params.v;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  j["action_value"] = s.action_value;
  j["nehari_residual"] = s.nehari_residual;
  j["quadratic_form"] = s.quadratic;
  j["nehari_relative"] = std::abs(s.nehari_residual) / s.quadratic;
  j["gradient_residual"] = s.gradient_residual;
  j["relative_gradient"] = s.relative_gradient;
  j["tail_mass_fraction"] = s.tail_mass_fraction;
  j["tail_below_1e-8"] = s.tail_mass_fraction < 1e-8;
  const FunctionalReport r = report(s.q, s.params);
  j["mass"] = r.mass;
  j["hamiltonian"] = r.hamiltonian;
  j["i_value"] = r.i_value;
  j["x_norm"] = r.x_norm;
  j["lp1_norm"] = r.lp1_norm;
  j["gn_quotient"] = std::isfinite(r.gn_quotient) ? json(r.gn_quotient) : json(nullptr);
  j["l2_norm"] = l2_norm(s.q);
  j["dx_norm"] = std::sqrt(dx_norm2(s.q));
  j["dy_half_norm"] = std::sqrt(dy_half_norm2(s.q));
  return j;
}

/// Ground state from output.snapshot_in when given (grid must match), otherwise solved.
inline SolitarySolution ground_state_for(const ExperimentConfig& c, const GridPtr& g) {
  const ModelParams mp = params_from(c);
  if (!c.snapshot_in.empty()) {
    Snapshot snap = load_snapshot(c.snapshot_in, g.get());
    require(std::abs(snap.params.p - mp.p) <= 1e-12 && std::abs(snap.params.omega - mp.omega) <= 1e-12 &&
                std::abs(snap.params.v - mp.v) <= 1e-12,
            "snapshot model parameters do not match the configuration");
    SolitarySolution s;
    s.params = mp;
    s.q = snap.field;
    s.action_value = action(s.q, mp);
    s.nehari_residual = nehari(s.q, mp);
    s.quadratic = quadratic_part(s.q, mp);
    s.gradient_residual = l2_norm(action_gradient(s.q, mp));
    s.relative_gradient = s.gradient_residual / l2_norm(s.q);
    s.tail_mass_fraction = tail_mass_fraction(s.q);
    s.converged = s.relative_gradient <= c.tol;
    return s;
  }
  return solve_nehari(mp, g, initial_field(c, g), solver_from(c));
}

// ---------------------------------------------------------------------------

inline CommandResult cmd_ground_state(const ExperimentConfig& c) {
  const ModelParams mp = params_from(c);
  mp.validate_variational();
  const GridPtr g = grid_from(c);
  const SolitarySolution s = solve_nehari(mp, g, initial_field(c, g), solver_from(c));
  const std::string snap = c.snapshot_out.empty() ? out_path(c, "ground_state.hwsf") : c.snapshot_out;
  save_snapshot(snap, s.q, mp);
  CommandResult r;
  r.report["command"] = "ground-state";
  r.report["config"] = config_json(c);
  r.report["solution"] = solution_json(s);
  r.report["snapshot"] = snap;
  r.exit_code = s.converged ? 0 : 1;
  write_report(c, "ground_state.json", r.report);
  return r;
}

/// Least-squares slope of ys against xs.
inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Unwrap a sampled periodic quantity (phase or box translation) into a continuous series.
inline std::vector<double> unwrap(const std::vector<double>& s, double period) {
  std::vector<double> out(s);
  for (std::size_t k = 1; k < out.size(); ++k) out[k] = out[k - 1] + std::remainder(s[k] - s[k - 1], period);
  return out;
}

inline CommandResult cmd_travel(const ExperimentConfig& c) {
  ExperimentConfig cc = c;
  if (cc.init_kind == "gaussian") cc.init_kind = "traveling";
  const ModelParams mp = params_from(cc);
  mp.validate_variational();
  const GridPtr g = grid_from(cc);
  const SolitarySolution s = solve_nehari(mp, g, initial_field(cc, g), solver_from(cc));
  const std::string snap = cc.snapshot_out.empty() ? out_path(cc, "travel.hwsf") : cc.snapshot_out;
  save_snapshot(snap, s.q, mp);
  CommandResult r;
  r.report["command"] = "travel";
  r.report["config"] = config_json(c);
  r.report["solution"] = solution_json(s);
  r.report["snapshot"] = snap;
  r.exit_code = s.converged ? 0 : 1;
  if (s.converged && cc.T > 0.0) {
    EvolveOptions o = evolve_options(cc, *g);
    o.orbit_reference = s.q;
    const EvolutionTrace tr = evolve(s.q, o);
    // u(t) ~ e^{i theta} Q(. + tau): a wave moving with velocity v has tau_2 = -v t
    const auto tau2 = unwrap(tr.tau2_series, g->ly());
    const auto theta = unwrap(tr.theta_series, 2.0 * std::numbers::pi);
    json e;
    e["T"] = cc.T;
    e["dt"] = o.dt;
    e["measured_velocity"] = -fit_slope(tr.times, tau2);
    e["measured_phase_rate"] = fit_slope(tr.times, theta);
    e["max_orbital_distance"] = *std::max_element(tr.orbital_distance_series.begin(), tr.orbital_distance_series.end());
    e["mass_drift"] = tr.max_mass_drift();
    e["hamiltonian_drift"] = tr.max_hamiltonian_drift();
    e["aborted"] = tr.aborted;
    r.report["evolution"] = e;
    if (tr.aborted) r.exit_code = 1;
  }
  write_report(c, "travel.json", r.report);
  return r;
}

inline json trace_summary(const EvolutionTrace& tr) {
  json j;
  j["scheme"] = tr.scheme;
  j["dt"] = tr.dt;
  j["samples"] = tr.times.size();
  j["final_time"] = tr.times.empty() ? 0.0 : tr.times.back();
  j["mass_drift"] = tr.max_mass_drift();
  j["hamiltonian_drift"] = tr.max_hamiltonian_drift();
  j["l4_linf_norm"] = tr.l4_linf_norm();
  j["mass_drift_flag"] = tr.mass_drift_flag;
  j["hamiltonian_drift_exceeded"] = tr.hamiltonian_drift_exceeded;
  j["blowup"] = tr.blowup;
  j["blowup_criterion"] = "L2_x H^s_y norm above 1e6 times its initial value (heuristic threshold)";
  j["aborted"] = tr.aborted;
  j["abort_reason"] = tr.abort_reason;
  return j;
}

inline CommandResult cmd_evolve(const ExperimentConfig& c) {
  const ModelParams mp = params_from(c);
  mp.validate();
  const GridPtr g = grid_from(c);
  Field u0 = c.snapshot_in.empty() ? initial_field(c, g) : load_snapshot(c.snapshot_in, g.get()).field;
  EvolveOptions o = evolve_options(c, *g);
  if (!c.snapshot_in.empty()) o.orbit_reference = u0;
  const EvolutionTrace tr = evolve(u0, o);

  std::vector<std::string> cols{"t", "mass", "hamiltonian", "l2x_hsy", "linf"};
  if (o.orbit_reference) cols.push_back("orbital_distance");
  CsvWriter csv(out_path(c, "trace.csv"), cols, config_hash(c));
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    std::vector<double> row{tr.times[k], tr.mass_series[k], tr.hamiltonian_series[k], tr.l2x_hsy_series[k],
                            tr.linf_series[k]};
    if (o.orbit_reference) row.push_back(tr.orbital_distance_series[k]);
    csv.row(row);
  }
  if (!c.snapshot_out.empty()) save_snapshot(c.snapshot_out, tr.final_state, mp);
  CommandResult r;
  r.report["command"] = "evolve";
  r.report["config"] = config_json(c);
  r.report["trace"] = trace_summary(tr);
  r.exit_code = tr.aborted ? 1 : 0;
  write_report(c, "evolve.json", r.report);
  return r;
}

/// Orbital distances below this fraction of ||Q||_X are splitting error, not perturbation.
inline constexpr double kSchemeFloor = 1e-3;

inline CommandResult cmd_stability(const ExperimentConfig& c) {
  if (!(c.p > 1.0 && c.p < kL2CriticalPower))
    throw UsageError("stability runs need 1 < p < 7/3 (got p = " + std::to_string(c.p) + ")");
  require(c.v == 0.0, "stability runs use standing waves (v = 0)");
  const GridPtr g = grid_from(c);
  const SolitarySolution s = ground_state_for(c, g);
  if (!s.converged) throw NumericalError("ground state did not converge");
  const double qx = x_norm(s.q);

  Field u0 = s.q;
  if (c.delta > 0.0) {
    Rng rng(c.seed);
    Field noise = band_limited_noise(g, rng);
    noise *= c.delta * qx / x_norm(noise);
    u0 += noise;
  }
  EvolveOptions o = evolve_options(c, *g);
  o.orbit_reference = s.q;
  const EvolutionTrace tr = evolve(u0, o);

  CsvWriter csv(out_path(c, "stability.csv"), {"t", "orbital_distance", "mass", "hamiltonian"}, config_hash(c));
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    csv.row({tr.times[k], tr.orbital_distance_series[k], tr.mass_series[k], tr.hamiltonian_series[k]});

  const double d0 = tr.orbital_distance_series.front();
  const double dmax = *std::max_element(tr.orbital_distance_series.begin(), tr.orbital_distance_series.end());
  const bool stable = !tr.aborted && dmax <= c.stable_factor * std::max(d0, kSchemeFloor * qx);
  CommandResult r;
  r.report["command"] = "stability";
  r.report["config"] = config_json(c);
  r.report["ground_state"] = solution_json(s);
  r.report["q_x_norm"] = qx;
  r.report["perturbation_x_norm"] = c.delta * qx;
  r.report["initial_distance"] = d0;
  r.report["max_distance"] = dmax;
  r.report["max_distance_over_delta_qx"] = c.delta > 0.0 ? json(dmax / (c.delta * qx)) : json(nullptr);
  r.report["max_distance_over_qx"] = dmax / qx;
  r.report["verdict_rule"] = "STABLE if max distance <= " + detail::fmt_double(c.stable_factor) +
                             " x max(initial distance, 1e-3 ||Q||_X) (experiment-design threshold)";
  r.report["verdict"] = stable ? "STABLE" : "FLAGGED";
  r.report["trace"] = trace_summary(tr);
  r.exit_code = tr.aborted ? 1 : 0;
  write_report(c, "stability.json", r.report);
  return r;
}

struct InstabilityRun {
  double lambda = 0.0;
  double initial_pairing = 0.0;
  double initial_distance = 0.0;
  double max_growth = 0.0;       ///< max distance / max(initial distance, scheme floor), trusted samples
  double growth_time = -1.0;     ///< first sample time reaching the growth factor
  bool unstable = false;
  EvolutionTrace trace;
  std::vector<double> pairing_series;
};

inline InstabilityRun instability_run(const Field& q, const ModelParams& mp, double lambda,
                                      const EvolveOptions& base, double factor) {
  InstabilityRun run;
  run.lambda = lambda;
  const Field u0 = t_lambda(q, lambda);
  run.initial_pairing = scaling_pairing(u0, mp);
  EvolveOptions o = base;
  o.orbit_reference = q;
  o.on_sample = [&](double, const Field& u) { run.pairing_series.push_back(scaling_pairing(u, mp)); };
  run.trace = evolve(u0, o);
  const auto& d = run.trace.orbital_distance_series;
  run.initial_distance = d.front();
  const double ref = std::max(run.initial_distance, kSchemeFloor * x_norm(q));
  // a sample that tripped an abort is not trusted
  const std::size_t trusted = run.trace.aborted ? d.size() - 1 : d.size();
  for (std::size_t k = 0; k < trusted; ++k) {
    const double growth = d[k] / ref;
    run.max_growth = std::max(run.max_growth, growth);
    if (growth >= factor && run.growth_time < 0.0) run.growth_time = run.trace.times[k];
  }
  run.unstable = run.max_growth >= factor;
  return run;
}

inline CommandResult cmd_instability(const ExperimentConfig& c) {
  if (!(c.p > kL2CriticalPower && c.p < 5.0))
    throw UsageError("instability runs need 7/3 < p < 5 (got p = " + std::to_string(c.p) + ")");
  require(c.v == 0.0, "instability runs use standing waves (v = 0)");
  const GridPtr g = grid_from(c);
  const ModelParams mp = params_from(c);
  const SolitarySolution s = ground_state_for(c, g);
  if (!s.converged) throw NumericalError("ground state did not converge");
  const EvolveOptions base = evolve_options(c, *g);

  CommandResult r;
  r.report["command"] = "instability";
  r.report["config"] = config_json(c);
  r.report["ground_state"] = solution_json(s);
  r.report["verdict_rule"] = "UNSTABLE if orbital distance reaches " + detail::fmt_double(c.unstable_factor) +
                             " x max(initial value, 1e-3 ||Q||_X) before T (experiment-design threshold, calibrated empirically)";
  json runs = json::array();
  for (double lambda : c.lambdas) {
    const InstabilityRun run = instability_run(s.q, mp, lambda, base, c.unstable_factor);
    CsvWriter csv(out_path(c, "instability_lambda_" + detail::fmt_double(lambda) + ".csv"),
                  {"t", "orbital_distance", "scaling_pairing", "hamiltonian", "l2x_hsy"}, config_hash(c));
    for (std::size_t k = 0; k < run.trace.times.size(); ++k)
      csv.row({run.trace.times[k], run.trace.orbital_distance_series[k], run.pairing_series[k],
               run.trace.hamiltonian_series[k], run.trace.l2x_hsy_series[k]});
    json j;
    j["lambda"] = lambda;
    j["initial_scaling_pairing"] = run.initial_pairing;
    j["initial_distance"] = run.initial_distance;
    j["max_growth"] = run.max_growth;
    j["growth_time"] = run.growth_time >= 0.0 ? json(run.growth_time) : json(nullptr);
    j["verdict"] = run.unstable ? "UNSTABLE" : "NOT-UNSTABLE";
    j["trace"] = trace_summary(run.trace);
    runs.push_back(j);
  }
  r.report["runs"] = runs;
  write_report(c, "instability.json", r.report);
  return r;
}

inline CommandResult cmd_sweep_velocity(const ExperimentConfig& c) {
  for (double v : c.v_list)
    if (!(std::abs(v) < 1.0)) throw UsageError("velocity list entries must satisfy |v| < 1 (got " + detail::fmt_double(v) + ")");
  for (std::size_t k = 1; k < c.v_list.size(); ++k)
    if (!(c.v_list[k] > c.v_list[k - 1])) throw UsageError("velocity list must be increasing");
  const GridPtr g = grid_from(c);
  ModelParams mp = params_from(c);
  mp.v = c.v_list.front();
  mp.validate_variational();

  CsvWriter csv(out_path(c, "sweep.csv"), {"v", "m_value", "l2_norm", "dx_norm", "dy_half_norm", "iterations"},
                config_hash(c));
  CommandResult r;
  r.report["command"] = "sweep-velocity";
  r.report["config"] = config_json(c);
  json rows = json::array();
  Field init = initial_field(c, g);
  std::vector<double> l2, dxn;
  bool failed = false;
  for (double v : c.v_list) {
    mp.v = v;
    const SolitarySolution s = solve_nehari(mp, g, init, solver_from(c));
    rows.push_back(solution_json(s));
    if (!s.converged) {
      failed = true;
      r.report["failed_at_v"] = v;
      break;
    }
    l2.push_back(l2_norm(s.q));
    dxn.push_back(std::sqrt(dx_norm2(s.q)));
    csv.row({v, s.action_value, l2.back(), dxn.back(), std::sqrt(dy_half_norm2(s.q)),
             static_cast<double>(s.iterations)});
    init = s.q;  // continuation
  }
  bool trend = true;
  for (std::size_t k = 1; k < l2.size(); ++k)
    trend = trend && l2[k] <= l2[k - 1] * (1.0 + 1e-3) && dxn[k] <= dxn[k - 1] * (1.0 + 1e-3);
  r.report["rows"] = rows;
  r.report["trend_non_increasing"] = trend;
  r.report["trend_rule"] = "l2_norm and dx_norm non-increasing in v within 1e-3 relative slack";
  if (!failed && !l2.empty()) r.report["l2_ratio_last_first"] = l2.back() / l2.front();
  r.exit_code = (failed || !trend) ? 1 : 0;
  write_report(c, "sweep.json", r.report);
  return r;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

inline json checks_json(const std::vector<Check>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  return a;
}

inline void le(std::vector<Check>& out, std::string name, double value, double threshold) {
  out.push_back({std::move(name), value, threshold, std::isfinite(value) && value <= threshold});
}

/// Grid, transform, functional and propagator identities that need no ground state.
inline std::vector<Check> core_checks(std::uint64_t seed) {
  std::vector<Check> out;
  Rng rng(seed);
  {
    auto g = make_grid(256, 256, 40.0, 40.0);
    Field f = band_limited_noise(g, rng);
    f += random_smooth_field(g, rng);
    const Field s = transform(f, Direction::to_spectral);
    le(out, "plancherel_256", std::abs(norm2(s) - norm2(f)) / norm2(f), 1e-12);
    le(out, "roundtrip_256", l2_norm(transform(s, Direction::to_physical) - f) / l2_norm(f), 1e-12);
    const Field gauss = Field::from_function(g, [](double x, double y) { return std::exp(-x * x - y * y); });
    le(out, "gaussian_mass_pi_over_4", std::abs(mass(gauss) - std::numbers::pi / 4.0), 1e-6);
    const double t = 0.7;
    le(out, "halfwave_isometry",
       std::abs(norm2(apply_symbol(f, symbols::HalfwaveGroup{t})) - norm2(f)) / norm2(f), 1e-12);
  }
  {
    auto g = make_grid(64, 64, 20.0, 20.0);
    const ModelParams mp{2.0, 1.0, 0.3};
    Field u = random_smooth_field(g, rng);
    const double lhs = action(u, mp);
    const double rhs = i_value(u, mp) + nehari(u, mp) / (mp.p + 1.0);
    le(out, "action_identity", std::abs(lhs - rhs) / std::abs(lhs), 1e-10);
    Field ur = u;
    ur *= std::polar(1.0, 1.1);
    le(out, "gauge_invariance", std::abs(action(ur, mp) - lhs) / std::abs(lhs), 1e-12);
    Field h = random_smooth_field(g, rng);
    const double eps = 1e-5;
    Field up = u, um = u;
    up.axpy(eps, h);
    um.axpy(-eps, h);
    const double fd = (action(up, mp) - action(um, mp)) / (2 * eps);
    const double an = std::real(inner(action_gradient(u, mp), h));
    le(out, "action_gradient_fd", std::abs(fd - an) / std::abs(an), 1e-6);
  }
  {
    le(out, "c_star_half_minus_2pi", std::abs(frac_constant(0.5) - 2.0 * std::numbers::pi), 1e-3);
    const std::size_t n = 512;
    const double ly = 40.0;
    std::vector<cplx> u(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double y = -0.5 * ly + j * ly / n;
      u[j] = std::exp(-y * y);
    }
    for (double s : {0.25, 0.5, 0.75})
      le(out, "frac_identity_s" + detail::fmt_double(s), frac_seminorm_identity_check(u, ly / n, s).relative_error,
         1e-2);
  }
  {
    auto g = make_grid(64, 64, 20.0, 20.0);
    const Field u0 = gaussian_init(g, 1.5, 1.5, 0.5);
    const double T = 0.1;
    const PicardResult pic = picard_solve(u0, T, 1000, 30, 2.0);
    Field s = u0;
    const StrangIntegrator st(g, T / 200, 2.0);
    st.advance(s, 200);
    le(out, "picard_vs_strang_T0.1", l2_norm(pic.solution - s), 1e-4);
    out.push_back({"picard_contraction", pic.ratios.empty() ? 0.0 : pic.ratios.front(), 1.0, pic.contraction});
  }
  {
    // sup |e^{it d_xx} e^{-x^2}| = (1 + 16 t^2)^{-1/4}; t >= 10 is well into the t^{-1/2} regime
    const std::size_t n = 16384;
    const double lx = 2000.0;
    std::vector<cplx> g(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -0.5 * lx + j * lx / n;
      g[j] = std::exp(-x * x);
    }
    std::vector<double> times;
    for (int k = 0; k < 9; ++k) times.push_back(10.0 * std::pow(2.0, k / 4.0));
    const DispersiveFit fit = dispersive_decay_probe(g, lx, times);
    out.push_back({"dispersive_exponent_plus_half", std::abs(fit.exponent + 0.5), 0.01,
                   fit.valid && std::abs(fit.exponent + 0.5) <= 0.01});
  }
  return out;
}

/// Checks that need a ground state.
inline std::vector<Check> ground_state_checks(const Field& q, const ModelParams& mp, std::uint64_t seed) {
  std::vector<Check> out;
  le(out, "relative_gradient", l2_norm(action_gradient(q, mp)) / l2_norm(q), 1e-6);
  le(out, "nehari_relative", std::abs(nehari(q, mp)) / quadratic_part(q, mp), 1e-8);
  if (mp.v != 0.0) return out;
  const SecondVariation sv = second_variation_scaling(q, mp);
  le(out, "second_variation_relative", sv.relative_error, 1e-4);
  le(out, "psi_orthogonality", std::abs(std::real(inner(q, psi_omega(q)))) / norm2(q), 1e-8);
  le(out, "scaling_pairing_over_norm2", std::abs(scaling_pairing(q, mp)) / norm2(q), 1e-6);
  {
    Rng rng(seed);
    const double gq = gn_quotient(q, mp.p);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) worst = std::max(worst, gn_quotient(random_smooth_field(q.grid_ptr(), rng), mp.p));
    out.push_back({"gn_ground_state_minus_max_random", gq - worst, 0.0, gq > worst});
  }
  if (mp.omega == 1.0) {
    const R1Diagnostics d = r1_diagnostics(q, mp.p);
    le(out, "r1_linearized_residual", d.linearized_residual, 1e-4);
    le(out, "r1_phi1_roundtrip", d.multiplier_roundtrip_error, 1e-8);
  }
  return out;
}

inline CommandResult cmd_verify(const ExperimentConfig& c) {
  std::vector<Check> checks = core_checks(c.seed);
  CommandResult r;
  r.report["command"] = "verify";
  r.report["config"] = config_json(c);
  if (!c.snapshot_in.empty()) {
    const GridPtr g = grid_from(c);
    const Snapshot snap = load_snapshot(c.snapshot_in, g.get());
    const auto more = ground_state_checks(snap.field, snap.params, c.seed);
    checks.insert(checks.end(), more.begin(), more.end());
  }
  bool all = true;
  for (const auto& ch : checks) all = all && ch.pass;
  r.report["checks"] = checks_json(checks);
  r.report["all_pass"] = all;
  r.exit_code = all ? 0 : 1;
  write_report(c, "verify.json", r.report);
  return r;
}

inline CommandResult run_command(const ExperimentConfig& c) {
  if (c.command == "ground-state") return cmd_ground_state(c);
  if (c.command == "travel") return cmd_travel(c);
  if (c.command == "evolve") return cmd_evolve(c);
  if (c.command == "stability") return cmd_stability(c);
  if (c.command == "instability") return cmd_instability(c);
  if (c.command == "sweep-velocity") return cmd_sweep_velocity(c);
  if (c.command == "verify") return cmd_verify(c);
  throw UsageError("unknown command '" + c.command + "'");
}

}  // namespace hwlab::lab
