#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "hwlab/error.hpp"

namespace hwlab {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Signed FFT-ordered wavenumbers 2*pi/L * {0, 1, ..., n/2-1, -n/2, ..., -1}.
inline std::vector<double> fft_wavenumbers(std::size_t n, double length) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / length;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t i = 0; i < n; ++i) {
    auto idx = static_cast<std::ptrdiff_t>(i);
    if (idx >= half) idx -= static_cast<std::ptrdiff_t>(n);
    k[i] = base * static_cast<double>(idx);
  }
  return k;
}

/// Periodic box [-lx/2, lx/2) x [-ly/2, ly/2) sampled on an nx-by-ny lattice.
///
/// Storage everywhere in the library is row-major with the x index slow and
/// the y index fast: flat index = i * ny + j.
class Grid {
 public:
  Grid(std::size_t nx, std::size_t ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    require(is_power_of_two(nx) && is_power_of_two(ny),
            "grid sizes must be powers of two (got " + std::to_string(nx) + "x" + std::to_string(ny) + ")");
    require(nx >= 8 && ny >= 8, "grid sizes must be at least 8");
    require(lx > 0.0 && ly > 0.0 && std::isfinite(lx) && std::isfinite(ly), "box lengths must be positive");
    dx_ = lx / static_cast<double>(nx);
    dy_ = ly / static_cast<double>(ny);
    xi_ = fft_wavenumbers(nx, lx);
    eta_ = fft_wavenumbers(ny, ly);
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double cell_area() const { return dx_ * dy_; }
  double area() const { return lx_ * ly_; }

  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& eta() const { return eta_; }

  double x(std::size_t i) const { return -0.5 * lx_ + static_cast<double>(i) * dx_; }
  double y(std::size_t j) const { return -0.5 * ly_ + static_cast<double>(j) * dy_; }

  bool is_nyquist_x(std::size_t i) const { return i == nx_ / 2; }
  bool is_nyquist_y(std::size_t j) const { return j == ny_ / 2; }

  /// Largest |xi|^2 + |eta| on the lattice (fastest linear phase rate).
  double max_linear_rate() const {
    const double kx = std::numbers::pi / dx_;
    const double ky = std::numbers::pi / dy_;
    return kx * kx + ky;
  }

  bool operator==(const Grid& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && lx_ == o.lx_ && ly_ == o.ly_;
  }

 private:
  std::size_t nx_, ny_;
  double lx_, ly_;
  double dx_{}, dy_{};
  std::vector<double> xi_, eta_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(std::size_t nx, std::size_t ny, double lx, double ly) {
  return std::make_shared<const Grid>(nx, ny, lx, ly);
}

}  // namespace hwlab
