#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hwlab/error.hpp"
#include "hwlab/fft.hpp"
#include "hwlab/grid.hpp"

namespace hwlab {

using cplx = std::complex<double>;

enum class Representation { physical, spectral };
enum class Direction { to_spectral, to_physical };

/// Complex field on a periodic grid.
///
/// In the physical representation values are point samples. In the spectral
/// representation values are Fourier-series coefficients c_{k,m} of the grid
/// interpolant, phased relative to the first sample:
///   u(x_i, y_j) = sum_{k,m} c_{k,m} exp(i (xi_k (x_i - x_0) + eta_m (y_j - y_0))).
/// With this scaling Plancherel reads sum |u|^2 dx dy = lx ly sum |c|^2.
class Field {
 public:
  Field() = default;

  explicit Field(GridPtr grid, Representation rep = Representation::physical)
      : grid_(std::move(grid)), values_(grid_->size()), rep_(rep) {}

  Field(GridPtr grid, std::vector<cplx> values, Representation rep = Representation::physical)
      : grid_(std::move(grid)), values_(std::move(values)), rep_(rep) {
    require(values_.size() == grid_->size(), "field value count does not match grid");
  }

  template <class F>
  static Field from_function(GridPtr grid, F&& f) {
    Field out(grid);
    const Grid& g = *grid;
    for (std::size_t i = 0; i < g.nx(); ++i)
      for (std::size_t j = 0; j < g.ny(); ++j) out.values_[i * g.ny() + j] = cplx(f(g.x(i), g.y(j)));
    return out;
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Representation representation() const { return rep_; }
  bool is_physical() const { return rep_ == Representation::physical; }
  bool is_spectral() const { return rep_ == Representation::spectral; }

  std::size_t size() const { return values_.size(); }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  std::vector<cplx>& raw() { return values_; }

  cplx& operator()(std::size_t i, std::size_t j) { return values_[i * grid_->ny() + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return values_[i * grid_->ny() + j]; }
  cplx& operator[](std::size_t k) { return values_[k]; }
  const cplx& operator[](std::size_t k) const { return values_[k]; }

  bool same_grid(const Field& o) const { return grid_ == o.grid_ || (grid_ && o.grid_ && *grid_ == *o.grid_); }

  Field& operator+=(const Field& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  Field& operator*=(cplx a) {
    for (auto& v : values_) v *= a;
    return *this;
  }
  /// this += a * o
  Field& axpy(cplx a, const Field& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * o.values_[k];
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(cplx a, Field b) { return b *= a; }
  friend Field operator*(Field b, cplx a) { return b *= a; }

  void check_compatible(const Field& o) const {
    require(same_grid(o), "fields live on different grids");
    require(rep_ == o.rep_, "fields are in different representations");
  }

  /// Replace the contents and tag in place (used by transforms).
  void set_representation(Representation rep) { rep_ = rep; }

 private:
  GridPtr grid_;
  std::vector<cplx> values_;
  Representation rep_ = Representation::physical;
};

/// Unitary-normalized transform between representations; rejects a mismatched direction.
inline Field transform(Field f, Direction dir) {
  const Grid& g = f.grid();
  if (dir == Direction::to_spectral) {
    require(f.is_physical(), "transform to spectral requires a physical field");
    fft::dft2(f.values(), g.nx(), g.ny(), fft::Sign::forward);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (auto& v : f.values()) v *= inv;
    f.set_representation(Representation::spectral);
  } else {
    require(f.is_spectral(), "transform to physical requires a spectral field");
    fft::dft2(f.values(), g.nx(), g.ny(), fft::Sign::backward);
    f.set_representation(Representation::physical);
  }
  return f;
}

inline Field to_spectral(Field f) { return f.is_spectral() ? f : transform(std::move(f), Direction::to_spectral); }
inline Field to_physical(Field f) { return f.is_physical() ? f : transform(std::move(f), Direction::to_physical); }

inline Field in_representation(Field f, Representation rep) {
  return rep == Representation::physical ? to_physical(std::move(f)) : to_spectral(std::move(f));
}

/// <a, b> = integral a conj(b), evaluated in whichever representation both fields share.
inline cplx inner(const Field& a, const Field& b) {
  a.check_compatible(b);
  cplx acc{};
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) acc += av[k] * std::conj(bv[k]);
  const Grid& g = a.grid();
  return acc * (a.is_physical() ? g.cell_area() : g.area());
}

inline double norm2(const Field& a) {
  double acc = 0.0;
  for (const auto& v : a.values()) acc += std::norm(v);
  const Grid& g = a.grid();
  return acc * (a.is_physical() ? g.cell_area() : g.area());
}

inline double l2_norm(const Field& a) { return std::sqrt(norm2(a)); }

inline double linf_norm(const Field& a) {
  double m = 0.0;
  const Field f = to_physical(a);
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Pointwise map in physical space.
template <class F>
Field pointwise(const Field& u, F&& f) {
  Field out = to_physical(u);
  for (auto& v : out.values()) v = f(v);
  return out;
}

/// Fraction of |u|^2 lying outside the central (1 - 2*margin) part of the box in
/// either direction. margin = 0.1 selects the outer 10% annulus.
inline double tail_mass_fraction(const Field& u, double margin = 0.1) {
  const Field f = to_physical(u);
  const Grid& g = f.grid();
  double total = 0.0, tail = 0.0;
  const double xcut = (0.5 - margin) * g.lx();
  const double ycut = (0.5 - margin) * g.ly();
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const bool xo = std::abs(g.x(i)) > xcut;
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double w = std::norm(f(i, j));
      total += w;
      if (xo || std::abs(g.y(j)) > ycut) tail += w;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace hwlab
