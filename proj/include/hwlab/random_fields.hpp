#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hwlab/functionals.hpp"

namespace hwlab {

using Rng = std::mt19937_64;

/// Complex white noise with the upper third of each axis spectrum removed.
inline Field band_limited_noise(const GridPtr& g, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Field f(g);
  for (auto& v : f.values()) v = {n(rng), n(rng)};
  return two_thirds_filter(f);
}

/// Sum of 1 to 4 anisotropic complex Gaussians with random centers, widths and amplitudes.
inline Field random_smooth_field(const GridPtr& g, Rng& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int k = count(rng);
  Field f(g);
  for (int m = 0; m < k; ++m) {
    const double cx = (unit(rng) - 0.5) * 0.4 * g->lx();
    const double cy = (unit(rng) - 0.5) * 0.4 * g->ly();
    const double wx = 0.5 + 3.0 * unit(rng);
    const double wy = 0.5 + 5.0 * unit(rng);
    const cplx amp = std::polar(0.2 + unit(rng), 2.0 * std::numbers::pi * unit(rng));
    f += Field::from_function(g, [&](double x, double y) {
      const double a = (x - cx) / wx, b = (y - cy) / wy;
      return amp * std::exp(-a * a - b * b);
    });
  }
  return f;
}

}  // namespace hwlab
