#pragma once

// Discretizations of S^1 and S^2 and radial graphs over them.
//
// S^1: N equispaced nodes theta_j = 2 pi j / N, periodic.
// S^2: N_lat x N_lon equirectangular nodes, cell-centred in latitude
//      (theta_i = (i + 1/2) pi / N_lat, never on a pole) and
//      phi_j = 2 pi j / N_lon in longitude. Rows beyond the poles are
//      closed by the ghost rule f(-theta, phi) = f(theta, phi + pi).

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace anisoflow {

class SphericalGrid {
 public:
  static constexpr int kMinNodes = 16;

  static SphericalGrid circle(int n_nodes);
  static SphericalGrid sphere(int n_lat, int n_lon);

  int dim() const noexcept { return dim_; }
  int n_lat() const noexcept { return n_lat_; }
  int n_lon() const noexcept { return n_lon_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_lat_) * static_cast<std::size_t>(n_lon_);
  }

  /// Spacing in the first coordinate (theta), used for step-size control.
  double spacing() const noexcept { return dtheta_; }
  double lon_spacing() const noexcept { return dlon_; }

  /// Polar angle of row i (n = 2) or node angle (n = 1, i = node).
  double theta(int i) const noexcept;
  double lon(int j) const noexcept { return dlon_ * j; }

  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n_lon_) +
           static_cast<std::size_t>(col);
  }

  /// For n = 1 the single "row" holds all nodes: n_lat = 1, n_lon = N.
  int n_rows() const noexcept { return n_lat_; }
  int n_cols() const noexcept { return n_lon_; }

  friend bool operator==(const SphericalGrid&, const SphericalGrid&) = default;

 private:
  SphericalGrid(int dim, int n_lat, int n_lon);

  int dim_ = 1;
  int n_lat_ = 1;
  int n_lon_ = kMinNodes;
  double dtheta_ = 0.0;
  double dlon_ = 0.0;
};

/// phi = log r sampled on a grid.
class RadialGraph {
 public:
  RadialGraph(SphericalGrid grid, std::vector<double> phi);

  /// phi == log(radius) everywhere.
  static RadialGraph sphere(const SphericalGrid& grid, double radius);

  const SphericalGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& phi() const noexcept { return phi_; }
  std::vector<double>& mutable_phi() noexcept { return phi_; }

  double phi_at(std::size_t node) const noexcept { return phi_[node]; }
  double radius_at(std::size_t node) const;

  friend bool operator==(const RadialGraph&, const RadialGraph&) = default;

 private:
  SphericalGrid grid_;
  std::vector<double> phi_;
};

/// Plain-text form: a header "# n=1 N=<N>" or "# n=2 N_lat=<a> N_lon=<b>",
/// then one row per node "theta,phi_value" (n = 1) or
/// "theta,phi,phi_value" (n = 2), all at 17 significant digits.
void write_graph(std::ostream& out, const RadialGraph& graph);
RadialGraph read_graph(std::istream& in);

/// Parses just the header line into a grid.
SphericalGrid parse_grid_header(const std::string& line);
std::string grid_header(const SphericalGrid& grid);

}  // namespace anisoflow
