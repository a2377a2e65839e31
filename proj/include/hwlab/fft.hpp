#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

namespace hwlab::fft {

enum class Sign : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

// FFTW's planner is not thread-safe; executing an existing plan on new arrays is.
// Plans are created once per shape, in place, with FFTW_ESTIMATE so results do
// not depend on timing measurements.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n0, std::size_t n1, Sign sign) {
    const auto key = std::make_tuple(n0, n1, static_cast<int>(sign));
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(n0 * (n1 == 0 ? 1 : n1));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = (n1 == 0)
                         ? fftw_plan_dft_1d(static_cast<int>(n0), buf, buf, static_cast<int>(sign), flags)
                         : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), buf, buf,
                                            static_cast<int>(sign), flags);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

}  // namespace detail

/// Unnormalized in-place 2-D DFT of a row-major n0 x n1 array.
inline void dft2(std::span<std::complex<double>> data, std::size_t n0, std::size_t n1, Sign sign) {
  auto plan = detail::PlanCache::instance().get(n0, n1, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

/// Unnormalized in-place 1-D DFT.
inline void dft1(std::span<std::complex<double>> data, Sign sign) {
  auto plan = detail::PlanCache::instance().get(data.size(), 0, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

/// Fourier-series coefficients c_k of samples u_j, u_j = sum_k c_k exp(2 pi i j k / n).
inline std::vector<std::complex<double>> coefficients_1d(std::span<const std::complex<double>> u) {
  std::vector<std::complex<double>> c(u.begin(), u.end());
  dft1(c, Sign::forward);
  const double inv = 1.0 / static_cast<double>(c.size());
  for (auto& v : c) v *= inv;
  return c;
}

inline std::vector<std::complex<double>> samples_1d(std::span<const std::complex<double>> c) {
  std::vector<std::complex<double>> u(c.begin(), c.end());
  dft1(u, Sign::backward);
  return u;
}

}  // namespace hwlab::fft
