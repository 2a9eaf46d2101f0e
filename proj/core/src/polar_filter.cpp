#include "anisoflow/polar_filter.hpp"

#include <cmath>
#include <numbers>

#include "anisoflow/parallel.hpp"

namespace anisoflow {

double second_difference_symbol(double x) noexcept {
  return (30.0 - 32.0 * std::cos(x) + 2.0 * std::cos(2.0 * x)) / 12.0;
}

PolarFilter::PolarFilter(const SphericalGrid& grid, double cap_angle) : grid_(grid) {
  const int half = grid.n_lon() / 2;
  m_max_.assign(static_cast<std::size_t>(grid.n_rows()), half);
  if (grid.dim() != 2 || !(cap_angle > 0.0)) return;
  sin_cap_ = std::sin(std::min(cap_angle, std::numbers::pi / 2));
  const double top = second_difference_symbol(std::numbers::pi);
  const double hl = grid.lon_spacing();
  for (int i = 0; i < grid.n_rows(); ++i) {
    const double s = std::sin(grid.theta(i));
    if (s >= sin_cap_) continue;
    int m = 0;
    while (m < half && second_difference_symbol((m + 1) * hl) * sin_cap_ * sin_cap_ <= top * s * s) ++m;
    m_max_[static_cast<std::size_t>(i)] = m;
    if (m < half) rings_.push_back({i, m});
  }
  const int n = grid.n_lon();
  cos_.resize(static_cast<std::size_t>(n));
  sin_.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    cos_[static_cast<std::size_t>(j)] = std::cos(2.0 * std::numbers::pi * j / n);
    sin_[static_cast<std::size_t>(j)] = std::sin(2.0 * std::numbers::pi * j / n);
  }
}

int PolarFilter::retained_modes(int row) const noexcept { return m_max_[static_cast<std::size_t>(row)]; }

double PolarFilter::effective_sine(int row) const noexcept {
  return std::max(std::sin(grid_.theta(row)), sin_cap_);
}

void PolarFilter::apply(std::vector<double>& values) const {
  if (rings_.empty()) return;
  const int n = grid_.n_lon();
  const int half = n / 2;
  parallel_for(rings_.size(), worker_count(), [&](std::size_t b, std::size_t e) {
    std::vector<double> ring(static_cast<std::size_t>(n));
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::size_t r = b; r < e; ++r) {
      const Ring& rg = rings_[r];
      double* row = values.data() + grid_.index(rg.row, 0);
      for (int j = 0; j < n; ++j) ring[static_cast<std::size_t>(j)] = row[j];
      // Either rebuild from the kept modes or subtract the removed ones.
      const bool rebuild = rg.m_max + 1 <= half - rg.m_max;
      const int m_lo = rebuild ? 0 : rg.m_max + 1;
      const int m_hi = rebuild ? rg.m_max : half;
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = rebuild ? 0.0 : ring[static_cast<std::size_t>(j)];
      for (int m = m_lo; m <= m_hi; ++m) {
        double a = 0.0;
        double c = 0.0;
        for (int j = 0; j < n; ++j) {
          const auto idx = static_cast<std::size_t>((m * j) % n);
          a += ring[static_cast<std::size_t>(j)] * cos_[idx];
          c += ring[static_cast<std::size_t>(j)] * sin_[idx];
        }
        const double w = (m == 0 || m == half) ? 1.0 / n : 2.0 / n;
        const double sign = rebuild ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j) {
          const auto idx = static_cast<std::size_t>((m * j) % n);
          out[static_cast<std::size_t>(j)] += sign * w * (a * cos_[idx] + c * sin_[idx]);
        }
      }
      for (int j = 0; j < n; ++j) row[j] = out[static_cast<std::size_t>(j)];
    }
  });
}

}  // namespace anisoflow
