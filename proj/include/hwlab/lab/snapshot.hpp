#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hwlab/functionals.hpp"

namespace hwlab::lab {

// HWSF layout, all little-endian:
//   "HWSF" | u32 version | u64 nx | u64 ny | f64 lx ly p omega v | nx*ny * (f64 re, f64 im)
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  Field field;
  ModelParams params;
};

namespace detail {

template <class T>
void put_le(std::vector<unsigned char>& buf, T value) {
  std::uint64_t bits;
  if constexpr (sizeof(T) == 8) bits = std::bit_cast<std::uint64_t>(value);
  else bits = static_cast<std::uint64_t>(std::bit_cast<std::uint32_t>(value));
  for (std::size_t k = 0; k < sizeof(T); ++k) buf.push_back(static_cast<unsigned char>(bits >> (8 * k)));
}

template <class T>
T get_le(const unsigned char*& p) {
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) bits |= static_cast<std::uint64_t>(p[k]) << (8 * k);
  p += sizeof(T);
  if constexpr (sizeof(T) == 8) return std::bit_cast<T>(bits);
  else return std::bit_cast<T>(static_cast<std::uint32_t>(bits));
}

}  // namespace detail

inline void save_snapshot(const std::string& path, const Field& u, const ModelParams& mp) {
  const Field f = to_physical(u);
  const Grid& g = f.grid();
  std::vector<unsigned char> buf;
  buf.reserve(4 + 4 + 16 + 40 + 16 * f.size());
  for (char c : {'H', 'W', 'S', 'F'}) buf.push_back(static_cast<unsigned char>(c));
  detail::put_le(buf, kSnapshotVersion);
  detail::put_le(buf, static_cast<std::uint64_t>(g.nx()));
  detail::put_le(buf, static_cast<std::uint64_t>(g.ny()));
  for (double d : {g.lx(), g.ly(), mp.p, mp.omega, mp.v}) detail::put_le(buf, d);
  for (const auto& v : f.values()) {
    detail::put_le(buf, v.real());
    detail::put_le(buf, v.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NumericalError("cannot open snapshot for writing: " + path);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw NumericalError("short write on snapshot: " + path);
}

/// Read a snapshot; when expected is given the header grid must match it exactly.
inline Snapshot load_snapshot(const std::string& path, const Grid* expected = nullptr) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open snapshot: " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t header = 4 + 4 + 16 + 40;
  require(buf.size() >= header, "snapshot too short: " + path);
  require(std::memcmp(buf.data(), "HWSF", 4) == 0, "bad snapshot magic in " + path);
  const unsigned char* p = buf.data() + 4;
  const auto version = detail::get_le<std::uint32_t>(p);
  require(version == kSnapshotVersion, "unsupported snapshot version " + std::to_string(version));
  const auto nx = detail::get_le<std::uint64_t>(p);
  const auto ny = detail::get_le<std::uint64_t>(p);
  const double lx = detail::get_le<double>(p), ly = detail::get_le<double>(p);
  ModelParams mp;
  mp.p = detail::get_le<double>(p);
  mp.omega = detail::get_le<double>(p);
  mp.v = detail::get_le<double>(p);
  require(nx > 0 && ny > 0 && nx < (1ULL << 32) && ny < (1ULL << 32), "snapshot grid size out of range");
  require(buf.size() == header + 16 * nx * ny, "snapshot payload size does not match its header");
  auto grid = make_grid(nx, ny, lx, ly);
  if (expected)
    require(*grid == *expected, "snapshot grid " + std::to_string(nx) + "x" + std::to_string(ny) +
                                    " does not match the active grid");
  std::vector<cplx> vals(nx * ny);
  for (auto& v : vals) {
    const double re = detail::get_le<double>(p);
    const double im = detail::get_le<double>(p);
    v = {re, im};
  }
  return {Field(grid, std::move(vals)), mp};
}

}  // namespace hwlab::lab
