#pragma once

// Longitudinal low-pass filter for rings near the poles of the
// equirectangular grid. On a ring at polar angle theta the longitudinal
// spacing shrinks like sin(theta); modes whose discrete second-derivative
// symbol exceeds that of the highest mode on the cap ring are removed, so the
// explicit step is governed by the cap latitude instead of the pole rows.

#include <vector>

#include "anisoflow/grid.hpp"

namespace anisoflow {

class PolarFilter {
 public:
  /// cap_angle in (0, pi/2]; 0 disables filtering. n = 1 grids never filter.
  PolarFilter(const SphericalGrid& grid, double cap_angle);

  bool active() const noexcept { return !rings_.empty(); }
  /// Highest retained longitudinal wavenumber of a row (n_lon / 2 when unfiltered).
  int retained_modes(int row) const noexcept;
  /// max(sin theta_row, sin cap_angle), or sin theta_row when inactive.
  double effective_sine(int row) const noexcept;

  /// Filters the values in place (size grid.size()).
  void apply(std::vector<double>& values) const;

 private:
  struct Ring {
    int row;
    int m_max;
  };

  SphericalGrid grid_;
  double sin_cap_ = 0.0;
  std::vector<Ring> rings_;
  std::vector<int> m_max_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Symbol of the fourth-order second-difference stencil at x = m h, times h^2.
double second_difference_symbol(double x) noexcept;

}  // namespace anisoflow
