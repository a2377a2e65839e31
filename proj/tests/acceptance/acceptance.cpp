// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "hwlab/hwlab.hpp"
#include "hwlab/lab/experiments.hpp"

using namespace hwlab;
constexpr double pi = std::numbers::pi;

namespace {

int failures = 0;

void line(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// p = 2, omega = 1 ground state on 256^2 over 40 x 40, shared by several criteria
SolitarySolution q1;

void transforms() {
  Stopwatch sw;
  auto g = make_grid(256, 256, 40, 40);
  Rng rng(2024);
  double worst_rt = 0.0, worst_pl = 0.0;
  for (int k = 0; k < 4; ++k) {
    Field f = band_limited_noise(g, rng);
    f += random_smooth_field(g, rng);
    const Field s = to_spectral(f);
    worst_pl = std::max(worst_pl, std::abs(norm2(s) - norm2(f)) / norm2(f));
    worst_rt = std::max(worst_rt, l2_norm(to_physical(s) - f) / l2_norm(f));
  }
  // a field with a closed-form norm: ||exp(-x^2 - y^2)||^2 = pi / 2
  const Field gauss = Field::from_function(g, [](double x, double y) { return std::exp(-x * x - y * y); });
  const double gerr = std::abs(norm2(to_spectral(gauss)) - pi / 2) / (pi / 2);
  const double t = sw.seconds();
  line(1, "transform/Plancherel 256^2", worst_rt <= 1e-12 && worst_pl <= 1e-12 && gerr <= 1e-12 && t < 5.0,
       fmt("roundtrip %.2e, plancherel %.2e, gaussian norm %.2e (<= 1e-12); %.2f s (< 5 s)", worst_rt, worst_pl,
           gerr, t));
}

void fractional() {
  Stopwatch sw;
  const std::size_t n = 512;
  const double ly = 40.0;
  std::vector<cplx> u(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = -0.5 * ly + j * ly / n;
    u[j] = std::exp(-y * y);
  }
  double worst = 0.0;
  std::string d;
  for (double s : {0.25, 0.5, 0.75}) {
    const FracIdentityResult r = frac_seminorm_identity_check(u, ly / n, s);
    worst = std::max(worst, r.relative_error);
    d += fmt("s=%.2f rel %.2e; ", s, r.relative_error);
  }
  // C_*(1/2) = int 2 (1 - cos r) / r^2 dr = 2 pi
  const double cerr = std::abs(frac_constant(0.5) - 2 * pi);
  const double t = sw.seconds();
  line(2, "fractional identity", worst <= 1e-2 && cerr <= 1e-3 && t < 30.0,
       d + fmt("|C*(1/2) - 2 pi| %.2e (<= 1e-3); %.2f s (< 30 s)", cerr, t));
}

void ground_state() {
  Stopwatch sw;
  auto g = make_grid(256, 256, 40, 40);
  const ModelParams mp{2.0, 1.0, 0.0};
  q1 = solve_nehari(mp, g, gaussian_init(g));
  // second start: seeded random smooth field; its translate sits off the lattice, where the flat
  // translation mode stalls the solver near relative gradient 3e-9
  Rng rng(7);
  SolverOptions o;
  o.tol = 1e-8;
  const SolitarySolution alt = solve_nehari(mp, g, random_smooth_field(g, rng), o);
  const double t = sw.seconds();
  const double neh = std::abs(q1.nehari_residual) / q1.quadratic;
  const double el = q1.gradient_residual / l2_norm(q1.q);
  const double el_alt = alt.gradient_residual / l2_norm(alt.q);
  const double agree = std::abs(alt.action_value - q1.action_value) / q1.action_value;
  line(3, "ground state p=2", neh <= 1e-8 && el <= 1e-6 && el_alt <= 1e-6 && agree <= 1e-6 && t < 120.0,
       fmt("S = %.12f, nehari/quad %.2e (<= 1e-8), EL %.2e / %.2e (<= 1e-6), action agreement %.2e (<= 1e-6); "
           "%.1f s (< 120 s)",
           q1.action_value, neh, el, el_alt, agree, t));
}

void scaling_law() {
  // Q_2 solved on the box the scaling maps 40 x 40 to, so both sides see the same truncation
  const double omega = 2.0, p = 2.0;
  const Field scaled = rescale_omega(q1.q, omega, p);
  const SolitarySolution q2 = solve_nehari({p, omega, 0.0}, scaled.grid_ptr(), gaussian_init(scaled.grid_ptr(), 1.4, 2.0));
  const OrbitFit f = orbital_fit(q2.q, scaled);
  const double rel_orbit = f.distance / x_norm(q2.q);
  const double sp = 1.5 - 2.0 / (p - 1.0);
  const double ratio = mass(q2.q) / mass(q1.q);
  const double rerr = std::abs(ratio / std::pow(omega, -sp) - 1.0);
  line(4, "scaling law omega=2", q2.converged && rel_orbit <= 1e-3 && rerr <= 1e-4,
       fmt("orbit distance / ||Q_2||_X %.2e (<= 1e-3), mass ratio %.8f vs 2^{-s_p} = %.8f, rel %.2e (<= 1e-4)",
           rel_orbit, ratio, std::pow(omega, -sp), rerr));
}

void gn_sharpness() {
  Rng rng(99);
  const double gq = gn_quotient(q1.q, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) worst = std::max(worst, gn_quotient(random_smooth_field(q1.q.grid_ptr(), rng), 2.0));
  line(5, "GN sharpness", gq > worst, fmt("Q_1 quotient %.6f > max of 200 random fields %.6f", gq, worst));
}

void second_variation_and_psi() {
  auto g = make_grid(128, 512, 20, 20);
  const ModelParams mp{3.0, 1.0, 0.0};
  const SolitarySolution q3 = solve_nehari(mp, g, gaussian_init(g, 1.5, 1.5));
  const SecondVariation sv = second_variation_scaling(q3.q, mp);

  // lambda-grid profile: concave at lambda = 1 for p = 3, convex for p = 2
  std::vector<double> lam;
  for (int k = 0; k <= 20; ++k) lam.push_back(0.5 * std::pow(4.0, k / 20.0));
  const auto prof3 = scaling_profile(q3.q, mp, lam);
  const auto prof2 = scaling_profile(q1.q, {2.0, 1.0, 0.0}, lam);
  const auto argmax = std::max_element(prof3.begin(), prof3.end()) - prof3.begin();
  const auto argmin = std::min_element(prof2.begin(), prof2.end()) - prof2.begin();
  const double d3 = prof3[9] - 2 * prof3[10] + prof3[11];
  const double d2 = prof2[9] - 2 * prof2[10] + prof2[11];
  line(6, "second variation", q3.converged && sv.relative_error <= 1e-4 && argmax == 10 && argmin == 10 && d3 < 0 && d2 > 0,
       fmt("analytic %.10f vs central difference %.10f, rel %.2e (<= 1e-4); profile max at lambda=%.3f (p=3), "
           "min at lambda=%.3f (p=2), second differences %.3e / %.3e",
           sv.analytic, sv.numeric, sv.relative_error, lam[argmax], lam[argmin], d3, d2));

  const double orth = std::abs(std::real(inner(q3.q, psi_omega(q3.q)))) / norm2(q3.q);
  line(7, "psi_omega orthogonality", orth <= 1e-8, fmt("|re<Q, psi>| / ||Q||^2 = %.2e (<= 1e-8)", orth));
}

void r1_linearization() {
  // the |D_y| part of the residual is set by the y resolution
  auto g = make_grid(256, 1024, 20, 10);
  const SolitarySolution q = solve_nehari({3.0, 1.0, 0.0}, g, gaussian_init(g, 1.5, 1.5));
  const R1Diagnostics d = r1_diagnostics(q.q, 3.0);
  line(8, "R_1 linearized equation", q.converged && d.linearized_residual <= 1e-4 && d.multiplier_roundtrip_error <= 1e-8,
       fmt("residual %.2e (<= 1e-4), Phi_1 reconstruction %.2e (<= 1e-8)", d.linearized_residual,
           d.multiplier_roundtrip_error));
}

void conservation() {
  EvolveOptions o;
  o.p = 2.0;
  o.T = 1.0;
  o.dt = 1e-3;
  o.sample_stride = 50;
  std::vector<double> phase;
  const Field& q = q1.q;
  o.on_sample = [&](double, const Field& u) { phase.push_back(std::arg(inner(u, q))); };
  const EvolutionTrace tr = evolve(q, o);
  for (std::size_t k = 1; k < phase.size(); ++k)
    phase[k] = phase[k - 1] + std::remainder(phase[k] - phase[k - 1], 2 * pi);
  const double rate = slope(tr.times, phase);
  line(9, "conservation", !tr.aborted && tr.max_mass_drift() <= 1e-12 && tr.max_hamiltonian_drift() <= 1e-6 &&
                              std::abs(rate - 1.0) <= 0.01,
       fmt("mass drift %.2e (<= 1e-12), H drift %.2e (<= 1e-6), phase rate %.6f (omega = 1 within 1%%)",
           tr.max_mass_drift(), tr.max_hamiltonian_drift(), rate));
}

void duhamel() {
  auto g = make_grid(64, 64, 20, 20);
  const Field u0 = gaussian_init(g, 1.5, 1.5, 0.5);
  const double T = 0.1;
  const PicardResult pic = picard_solve(u0, T, 1000, 30, 2.0);
  std::vector<double> err;
  for (std::size_t n : {25, 50, 100, 200}) {
    Field u = u0;
    StrangIntegrator(g, T / n, 2.0).advance(u, n);
    err.push_back(l2_norm(u - pic.solution));
  }
  bool order = true;
  std::string ratios;
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    const double r = err[k] / err[k + 1];
    order = order && r >= 3.5 && r <= 4.5;
    ratios += fmt("%.3f ", r);
  }
  line(10, "Duhamel cross-oracle", pic.contraction && err.back() <= 1e-4 && order,
       fmt("||picard - strang|| %.2e at dt = 5e-4 (<= 1e-4); halving ratios ", err.back()) + ratios +
           "(3.5-4.5)");
}

void dispersive() {
  const std::size_t n = 16384;
  const double lx = 2000.0;
  std::vector<cplx> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -0.5 * lx + j * lx / n;
    g[j] = std::exp(-x * x);
  }
  std::vector<double> times;
  for (int k = 0; k < 9; ++k) times.push_back(10.0 * std::pow(2.0, k / 4.0));
  const DispersiveFit f = dispersive_decay_probe(g, lx, times);
  line(11, "dispersive decay", f.valid && std::abs(f.exponent + 0.5) <= 0.05,
       fmt("fitted exponent %.5f (-0.5 +- 0.05), wrap-around %s", f.exponent, f.wrapped ? "yes" : "no"));
}

void stability() {
  Stopwatch sw;
  const Field& q = q1.q;
  const double qx = x_norm(q), delta = 1e-2;
  Rng rng(1);
  Field noise = band_limited_noise(q.grid_ptr(), rng);
  noise *= delta * qx / x_norm(noise);
  lab::ExperimentConfig c;  // default T = 20 and automatic dt
  EvolveOptions o = lab::evolve_options(c, q.grid());
  o.orbit_reference = q;
  const EvolutionTrace tr = evolve(q + noise, o);
  double dmax = 0.0;
  for (double d : tr.orbital_distance_series) dmax = std::max(dmax, d);
  const double t = sw.seconds();
  line(12, "orbital stability p=2", !tr.aborted && dmax <= 3 * delta * qx && t < 600.0,
       fmt("max orbit distance / (delta ||Q||_X) = %.3f (<= 3) to T = %.0f, dt = %.3e; %.0f s (< 600 s)",
           dmax / (delta * qx), tr.times.back(), o.dt, t));
}

void instability() {
  // 128 x 256 on 20 x 10; the p = 3 run aborts on Hamiltonian drift once it concentrates, and
  // only samples before the abort count toward growth
  auto g = make_grid(128, 256, 20, 10);
  EvolveOptions o;
  o.T = 20.0;
  o.dt = 2.5e-4;
  o.sample_stride = 200;
  std::string d;
  bool pass = true;
  for (double p : {3.0, 2.0}) {
    const ModelParams mp{p, 1.0, 0.0};
    const SolitarySolution q = solve_nehari(mp, g, gaussian_init(g, 1.5, 1.5));
    o.p = p;
    const lab::InstabilityRun run = lab::instability_run(q.q, mp, 1.05, o, 10.0);
    pass = pass && q.converged && (p == 3.0 ? run.unstable : !run.unstable);
    d += fmt("p=%.0f growth %.2f%s%s; ", p, run.max_growth,
             run.growth_time >= 0 ? fmt(" (x10 at t = %.3f)", run.growth_time).c_str() : "",
             run.trace.aborted ? fmt(", stopped at t = %.3f", run.trace.times.back()).c_str() : "");
  }
  line(13, "instability p=3 vs p=2 control", pass, d + "threshold x10 before T = 20");
}

void velocity() {
  lab::ExperimentConfig c;
  c.command = "sweep-velocity";
  c.out_dir = (std::filesystem::temp_directory_path() / "hwlab_acceptance_sweep").string();
  const lab::CommandResult r = lab::run_command(c);
  std::vector<double> l2, dxn;
  for (const auto& row : r.report["rows"]) {
    l2.push_back(row["l2_norm"].get<double>());
    dxn.push_back(row["dx_norm"].get<double>());
  }
  std::filesystem::remove_all(c.out_dir);
  const bool complete = l2.size() == c.v_list.size() && r.exit_code == 0;
  const bool shrink = complete && l2.back() <= 0.5 * l2.front() && dxn.back() <= 0.5 * dxn.front();

  auto g = make_grid(128, 128, 20, 20);
  const Field phi = positive_frequency_profile(g);
  std::vector<double> iv;
  for (double lambda : {4.0, 8.0, 16.0, 32.0}) iv.push_back(traveling_test_point(phi, lambda, 1.0, 2.0).i_value);
  bool decreasing = true;
  for (std::size_t k = 1; k < iv.size(); ++k) decreasing = decreasing && iv[k] < iv[k - 1];

  std::string d;
  for (std::size_t k = 0; k < l2.size(); ++k) d += fmt("v=%.2f l2 %.4f dx %.4f; ", c.v_list[k], l2[k], dxn[k]);
  d += fmt("i_value(phi_lambda) %.4e %.4e %.4e %.4e", iv[0], iv[1], iv[2], iv[3]);
  line(14, "velocity degeneration", complete && r.report["trend_non_increasing"].get<bool>() && shrink && decreasing,
       d);
}

}  // namespace

int main() {
  transforms();
  fractional();
  ground_state();
  scaling_law();
  gn_sharpness();
  second_variation_and_psi();
  r1_linearization();
  conservation();
  duhamel();
  dispersive();
  stability();
  instability();
  velocity();
  std::printf("%s: %d of 14 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
