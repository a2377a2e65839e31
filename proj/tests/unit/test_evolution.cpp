#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hwlab/evolution.hpp"
#include "hwlab/solitary.hpp"

using namespace hwlab;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

Field gauss(const GridPtr& g, double amp = 1.0) {
  return Field::from_function(g, [amp](double x, double y) {
    return amp * std::exp(-x * x / 2 - y * y / 3) * std::polar(1.0, 0.4 * x);
  });
}

double slope(const std::vector<double>& t, const std::vector<double>& y, std::size_t n) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t k = 0; k < n; ++k) {
    st += t[k];
    sy += y[k];
    stt += t[k] * t[k];
    sty += t[k] * y[k];
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

std::vector<double> unwrap(std::vector<double> a) {
  for (std::size_t k = 1; k < a.size(); ++k) a[k] = a[k - 1] + std::remainder(a[k] - a[k - 1], 2 * pi);
  return a;
}

// p = 2 standing wave on a grid small enough for long runs
const SolitarySolution& q1() {
  static const SolitarySolution s = [] {
    auto g = make_grid(128, 128, 30, 30);
    return solve_nehari({2.0, 1.0, 0.0}, g, gaussian_init(g));
  }();
  return s;
}

}  // namespace

TEST_CASE("linear group") {
  auto g = make_grid(64, 32, 20, 10);
  const Field u = gauss(g);
  CHECK(l2_norm(to_physical(linear_propagate(u, 0.0)) - u) <= 1e-15 * l2_norm(u));

  // plane wave picks up exp(i t (-k^2 - |m|))
  const double k = 2 * pi * 3 / 20, m = 2 * pi * -2 / 10, t = 0.37;
  const Field w = Field::from_function(g, [&](double x, double y) { return std::polar(1.0, k * x + m * y); });
  const Field got = to_physical(linear_propagate(w, t));
  CHECK(l2_norm(got - std::polar(1.0, t * (-k * k - std::abs(m))) * w) <= 1e-13 * l2_norm(w));

  // group law and isometry
  const Field back = to_physical(linear_propagate(linear_propagate(u, 0.8), -0.8));
  CHECK(l2_norm(back - u) <= 1e-12 * l2_norm(u));
  const Field ab = to_physical(linear_propagate(linear_propagate(u, 0.3), 0.5));
  CHECK(l2_norm(ab - to_physical(linear_propagate(u, 0.8))) <= 1e-12 * l2_norm(u));
  CHECK(l2_norm(linear_propagate(u, 2.5)) == Approx(l2_norm(u)).epsilon(1e-14));
}

TEST_CASE("nonlinear phase of a constant field") {
  auto g = make_grid(16, 16, 4, 4);
  Field u(g);
  for (auto& v : u.values()) v = 0.7;
  nonlinear_phase_inplace(u, 0.3, 3.0);
  for (const auto& v : u.values()) CHECK(std::abs(v - std::polar(0.7, 0.3 * 0.49)) <= 1e-15);
  Field s = to_spectral(u);
  CHECK_THROWS_AS(nonlinear_phase_inplace(s, 0.1, 3.0), PreconditionError);
}

TEST_CASE("Strang steps conserve mass") {
  auto g = make_grid(64, 64, 20, 20);
  Field u = gauss(g, 1.5);
  const double m0 = mass(u);
  const StrangIntegrator step(g, 1e-3, 3.0);
  step.advance(u, 1000);
  CHECK(std::abs(mass(u) - m0) <= 1e-12 * m0);
  CHECK_THROWS_AS(strang_step(u, 0.0, 3.0), PreconditionError);
  CHECK_THROWS_AS(StrangIntegrator(g, 0.0, 3.0), PreconditionError);
  // the merged loop is the same composition as single steps
  Field a = gauss(g), b = gauss(g);
  StrangIntegrator(g, 2e-3, 2.0).advance(a, 5);
  for (int k = 0; k < 5; ++k) b = strang_step(b, 2e-3, 2.0);
  CHECK(l2_norm(a - to_physical(b)) <= 1e-13 * l2_norm(a));
}

TEST_CASE("Strang composition is time reversible") {
  auto g = make_grid(64, 64, 20, 20);
  const Field u0 = gauss(g, 1.2);
  Field u = u0;
  StrangIntegrator(g, 2e-3, 3.0).advance(u, 500);
  CHECK(l2_norm(u - u0) > 1e-2 * l2_norm(u0));
  StrangIntegrator(g, -2e-3, 3.0).advance(u, 500);
  CHECK(l2_norm(u - u0) <= 1e-8 * l2_norm(u0));
}

TEST_CASE("Strang converges at second order toward the Picard solution") {
  auto g = make_grid(64, 64, 20, 20);
  const Field u0 = gauss(g, 0.5);
  const PicardResult ref = picard_solve(u0, 0.1, 500, 8, 2.0);
  REQUIRE(ref.contraction);
  std::vector<double> err;
  for (std::size_t n : {20, 40, 80}) {
    Field u = u0;
    StrangIntegrator(g, 0.1 / n, 2.0).advance(u, n);
    err.push_back(l2_norm(u - ref.solution));
  }
  CHECK(err.back() <= 1e-4);
  CHECK(err[0] / err[1] == Approx(4.0).margin(0.5));
  CHECK(err[1] / err[2] == Approx(4.0).margin(0.5));
}

TEST_CASE("Picard iteration") {
  auto g = make_grid(64, 64, 20, 20);
  const Field u0 = gauss(g, 0.1);
  // coupling off: the iteration returns the free flow
  const PicardResult lin = picard_solve(u0, 0.1, 50, 3, 2.0, 0.0);
  const Field free = to_physical(linear_propagate(u0, 0.1));
  CHECK(l2_norm(lin.solution - free) <= 1e-12 * l2_norm(u0));

  const PicardResult r = picard_solve(u0, 0.05, 100, 6, 2.0);
  CHECK(r.contraction);
  REQUIRE(r.ratios.size() == 5);
  for (std::size_t k = 0; k + 2 < r.ratios.size(); ++k) CHECK(r.ratios[k] < 1.0);
  CHECK(r.iterate_distances.back() <= 1e-12);
  CHECK_THROWS_AS(picard_solve(u0, 0.0, 10, 2, 2.0), PreconditionError);
  CHECK_THROWS_AS(picard_solve(u0, 0.1, 0, 2, 2.0), PreconditionError);
}

TEST_CASE("dispersive decay of a Gaussian") {
  // e^{i t d_xx} e^{-x^2} has sup norm (1 + 16 t^2)^{-1/4}
  const std::size_t n = 16384;
  const double lx = 2000.0;
  std::vector<cplx> prof(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = -lx / 2 + k * lx / n;
    prof[k] = std::exp(-x * x);
  }
  std::vector<double> times;
  for (int k = 0; k < 9; ++k) times.push_back(10.0 * std::pow(2.0, k / 4.0));
  const DispersiveFit f = dispersive_decay_probe(prof, lx, times);
  REQUIRE(f.valid);
  CHECK(f.exponent == Approx(-0.5).margin(0.05));
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(f.sup_norms[k] == Approx(std::pow(1 + 16 * times[k] * times[k], -0.25)).epsilon(1e-10));

  CHECK_THROWS_AS(dispersive_decay_probe(prof, lx, {10.0}), PreconditionError);
  CHECK_THROWS_AS(dispersive_decay_probe(std::vector<cplx>(n), lx, times), PreconditionError);
}

TEST_CASE("dispersive probe flags wrap-around") {
  const std::size_t n = 256;
  const double lx = 20.0;
  std::vector<cplx> prof(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = -lx / 2 + k * lx / n;
    prof[k] = std::exp(-x * x);
  }
  CHECK(dispersive_decay_probe(prof, lx, {0.05, 0.1}).valid);
  const DispersiveFit f = dispersive_decay_probe(prof, lx, {2.0, 5.0});
  CHECK(f.wrapped);
  CHECK_FALSE(f.valid);
}

TEST_CASE("evolve preconditions and sampling") {
  auto g = make_grid(64, 64, 20, 20);
  const Field u0 = gauss(g);
  EvolveOptions o;
  o.T = 0.1;
  o.dt = 1e-3;
  o.sample_stride = 10;
  int calls = 0;
  o.on_sample = [&](double, const Field& u) {
    ++calls;
    CHECK(u.is_physical());
  };
  const EvolutionTrace tr = evolve(u0, o);
  CHECK_FALSE(tr.aborted);
  REQUIRE(tr.times.size() == 11);
  CHECK(calls == 11);
  for (std::size_t k = 0; k < tr.times.size(); ++k) CHECK(tr.times[k] == Approx(k * 0.01).margin(1e-15));
  CHECK(tr.linf_series.size() == 11);
  CHECK(tr.orbital_distance_series.empty());
  // L^4_T L^inf against a direct trapezoid sum
  double acc = 0.0;
  for (std::size_t k = 1; k < 11; ++k)
    acc += 0.005 * (std::pow(tr.linf_series[k], 4) + std::pow(tr.linf_series[k - 1], 4));
  CHECK(tr.l4_linf_norm() == Approx(std::pow(acc, 0.25)).epsilon(1e-14));

  EvolveOptions bad = o;
  bad.on_sample = nullptr;
  bad.dt = 1.0;
  bad.T = 10.0;
  CHECK_THROWS_AS(evolve(u0, bad), PreconditionError);
  bad = o;
  bad.T = 0.1005;
  CHECK_THROWS_AS(evolve(u0, bad), PreconditionError);
  bad = o;
  bad.sample_stride = 7;
  CHECK_THROWS_AS(evolve(u0, bad), PreconditionError);
  bad = o;
  bad.T = 0.0;
  CHECK_THROWS_AS(evolve(u0, bad), PreconditionError);
}

TEST_CASE("zero data gives a zero trace") {
  auto g = make_grid(32, 32, 10, 10);
  EvolveOptions o;
  o.T = 0.05;
  o.dt = 1e-3;
  o.sample_stride = 5;
  const EvolutionTrace tr = evolve(Field(g), o);
  CHECK_FALSE(tr.aborted);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(tr.mass_series[k] == 0.0);
    CHECK(tr.hamiltonian_series[k] == 0.0);
    CHECK(tr.l2x_hsy_series[k] == 0.0);
    CHECK(tr.linf_series[k] == 0.0);
  }
  CHECK(l2_norm(tr.final_state) == 0.0);
}

TEST_CASE("evolve aborts on a tight Hamiltonian tolerance") {
  auto g = make_grid(64, 64, 20, 20);
  EvolveOptions o;
  o.p = 3.0;
  o.T = 0.5;
  o.dt = 1e-3;
  o.sample_stride = 10;
  o.hamiltonian_tolerance = 1e-14;
  const EvolutionTrace tr = evolve(gauss(g, 2.0), o);
  CHECK(tr.aborted);
  CHECK(tr.hamiltonian_drift_exceeded);
  CHECK(tr.times.back() < 0.5);
  CHECK_FALSE(tr.abort_reason.empty());

  // a low blow-up factor trips the heuristic monitor on focusing data that concentrates
  o.hamiltonian_tolerance = 1.0;
  o.blowup_factor = 1.0 + 1e-9;
  const EvolutionTrace b = evolve(gauss(g, 3.0), o);
  CHECK(b.blowup);
  CHECK(b.aborted);
}

TEST_CASE("Hamiltonian drift is second order in dt") {
  auto g = make_grid(64, 64, 20, 20);
  std::vector<double> drift;
  for (double dt : {2e-3, 1e-3}) {
    EvolveOptions o;
    o.T = 1.0;
    o.dt = dt;
    o.sample_stride = static_cast<std::size_t>(std::llround(0.1 / dt));
    drift.push_back(evolve(gauss(g, 1.5), o).max_hamiltonian_drift());
  }
  CHECK(drift[1] <= 1e-6);
  CHECK(drift[0] / drift[1] == Approx(4.0).margin(0.5));
}

TEST_CASE("standing wave: conservation and phase rate over T = 1") {
  const SolitarySolution& s = q1();
  REQUIRE(s.converged);
  const Field& q = s.q;
  EvolveOptions o;
  o.T = 1.0;
  o.dt = 1e-3;
  o.sample_stride = 50;
  std::vector<double> phase;
  o.on_sample = [&](double, const Field& u) { phase.push_back(std::arg(inner(u, q))); };
  const EvolutionTrace tr = evolve(q, o);
  CHECK(tr.max_mass_drift() <= 1e-12);
  CHECK(tr.max_hamiltonian_drift() <= 1e-6);
  const auto ph = unwrap(phase);
  CHECK(slope(tr.times, ph, ph.size()) == Approx(1.0).epsilon(0.01));
}

TEST_CASE("standing wave stays on its orbit up to T = 10") {
  const SolitarySolution& s = q1();
  const Field& q = s.q;
  EvolveOptions o;
  o.T = 10.0;
  o.dt = 2.5e-3;
  o.sample_stride = 400;
  o.orbit_reference = q;
  const EvolutionTrace tr = evolve(q, o);
  REQUIRE_FALSE(tr.aborted);
  double worst = 0.0;
  for (double d : tr.orbital_distance_series) worst = std::max(worst, d);
  CHECK(worst <= 1e-3 * x_norm(q));
}

TEST_CASE("traveling wave translates at its velocity") {
  // the eta spectrum of Q_{1,0.5} decays slowly on the eta > 0 side; at ny = 128 the Nyquist
  // mode, which carries no transport, holds enough content to shed 1% of the profile
  auto g = make_grid(128, 256, 30, 30);
  const SolitarySolution s = solve_nehari({2.0, 1.0, 0.5}, g, traveling_init(g));
  REQUIRE(s.converged);
  EvolveOptions o;
  o.T = 1.0;
  o.dt = 2e-3;
  o.sample_stride = 25;
  o.orbit_reference = s.q;
  const EvolutionTrace tr = evolve(s.q, o);
  REQUIRE_FALSE(tr.aborted);
  // u(t) = e^{it} Q(x, y - v t) = e^{i theta} Q(. + tau): tau_2 = -v t
  const double rate = -slope(tr.times, tr.tau2_series, tr.times.size());
  CHECK(rate == Approx(0.5).epsilon(0.02));
  for (double d : tr.orbital_distance_series) CHECK(d <= 1e-3 * x_norm(s.q));
}

TEST_CASE("scaling covariance of the discrete flow") {
  // psi_lambda(t, x, y) = lambda^{2/(p-1)} psi(lambda^2 t, lambda x, lambda^2 y): on the grid this is
  // the same sample array on a box of size (lx / lambda, ly / lambda^2)
  const double p = 3.0, lambda = 1.5;
  auto g = make_grid(64, 64, 20, 20);
  auto gl = make_grid(64, 64, 20 / lambda, 20 / (lambda * lambda));
  const Field u0 = gauss(g, 1.2);
  Field v0(gl);
  for (std::size_t m = 0; m < u0.size(); ++m) v0[m] = std::pow(lambda, 2 / (p - 1)) * u0[m];

  Field u = u0;
  StrangIntegrator(g, 1e-3 * lambda * lambda, p).advance(u, 200);
  Field v = v0;
  StrangIntegrator(gl, 1e-3, p).advance(v, 200);
  double err = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m) err = std::max(err, std::abs(v[m] - std::pow(lambda, 2 / (p - 1)) * u[m]));
  CHECK(err <= 1e-10 * linf_norm(v));
}

TEST_CASE("L2_x H^s_y monitor") {
  auto g = make_grid(32, 64, 10, 20);
  const double m = 2 * pi * 3 / 20;
  const Field w = Field::from_function(g, [&](double, double y) { return std::polar(1.0, m * y); });
  CHECK(l2x_hsy_norm(w, 0.6) == Approx(std::pow(1 + m * m, 0.3) * l2_norm(w)).epsilon(1e-13));
  CHECK(l2x_hsy_norm(w, 0.0) == Approx(l2_norm(w)).epsilon(1e-13));
}
