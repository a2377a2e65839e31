// Solve a ground state, evolve it as a standing wave and print what the orbit monitor sees.
#include <cstdio>

#include "hwlab/hwlab.hpp"

int main() {
  using namespace hwlab;
  auto g = make_grid(128, 128, 30, 30);
  const ModelParams mp{2.0, 1.0, 0.0};
  const SolitarySolution s = solve_nehari(mp, g, gaussian_init(g));
  std::printf("ground state: converged=%d iterations=%d action=%.10f mass=%.10f\n", s.converged, s.iterations,
              s.action_value, mass(s.q));

  EvolveOptions o;
  o.p = mp.p;
  o.T = 2.0;
  o.dt = 2.5e-3;
  o.sample_stride = 80;
  o.orbit_reference = s.q;
  const EvolutionTrace tr = evolve(s.q, o);
  std::printf("%8s %14s %14s %14s\n", "t", "theta", "orbit dist", "hamiltonian");
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    std::printf("%8.3f %14.8f %14.3e %14.10f\n", tr.times[k], tr.theta_series[k], tr.orbital_distance_series[k],
                tr.hamiltonian_series[k]);
  std::printf("mass drift %.2e, Hamiltonian drift %.2e, L4_T Linf %.6f\n", tr.max_mass_drift(),
              tr.max_hamiltonian_drift(), tr.l4_linf_norm());
}
