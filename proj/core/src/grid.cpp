#include "anisoflow/grid.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "anisoflow/errors.hpp"

namespace anisoflow {

SphericalGrid::SphericalGrid(int dim, int n_lat, int n_lon)
    : dim_(dim), n_lat_(n_lat), n_lon_(n_lon) {
  dlon_ = 2.0 * std::numbers::pi / n_lon;
  dtheta_ = dim == 1 ? dlon_ : std::numbers::pi / n_lat;
}

SphericalGrid SphericalGrid::circle(int n_nodes) {
  if (n_nodes < kMinNodes) {
    throw std::invalid_argument("circle grid needs at least 16 nodes, got " + std::to_string(n_nodes));
  }
  return SphericalGrid(1, 1, n_nodes);
}

SphericalGrid SphericalGrid::sphere(int n_lat, int n_lon) {
  if (n_lat < kMinNodes || n_lon < kMinNodes) {
    throw std::invalid_argument("sphere grid needs N_lat, N_lon >= 16");
  }
  if (n_lon % 2 != 0) {
    throw std::invalid_argument("sphere grid needs an even N_lon for the pole ghost rule");
  }
  return SphericalGrid(2, n_lat, n_lon);
}

double SphericalGrid::theta(int i) const noexcept {
  return dim_ == 1 ? dlon_ * i : (i + 0.5) * dtheta_;
}

RadialGraph::RadialGraph(SphericalGrid grid, std::vector<double> phi)
    : grid_(grid), phi_(std::move(phi)) {
  if (phi_.size() != grid_.size()) {
    throw std::invalid_argument("radial graph: " + std::to_string(phi_.size()) +
                                " values for a grid of " + std::to_string(grid_.size()) + " nodes");
  }
  for (std::size_t i = 0; i < phi_.size(); ++i) {
    if (!std::isfinite(phi_[i])) {
      throw std::invalid_argument("radial graph: non-finite value at node " + std::to_string(i));
    }
  }
}

RadialGraph RadialGraph::sphere(const SphericalGrid& grid, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  return RadialGraph(grid, std::vector<double>(grid.size(), std::log(radius)));
}

double RadialGraph::radius_at(std::size_t node) const { return std::exp(phi_[node]); }

std::string grid_header(const SphericalGrid& grid) {
  if (grid.dim() == 1) return "# n=1 N=" + std::to_string(grid.n_lon());
  return "# n=2 N_lat=" + std::to_string(grid.n_lat()) + " N_lon=" + std::to_string(grid.n_lon());
}

SphericalGrid parse_grid_header(const std::string& line) {
  int n = 0, a = 0, b = 0;
  if (std::sscanf(line.c_str(), "# n=%d N_lat=%d N_lon=%d", &n, &a, &b) == 3 && n == 2) {
    return SphericalGrid::sphere(a, b);
  }
  if (std::sscanf(line.c_str(), "# n=%d N=%d", &n, &a) == 2 && n == 1) {
    return SphericalGrid::circle(a);
  }
  throw FormatError("bad grid header: '" + line + "'");
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

double parse_double(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_graph(std::ostream& out, const RadialGraph& graph) {
  const SphericalGrid& g = graph.grid();
  out << grid_header(g) << '\n';
  for (int i = 0; i < g.n_rows(); ++i) {
    for (int j = 0; j < g.n_cols(); ++j) {
      if (g.dim() == 1) {
        put(out, g.theta(j));
      } else {
        put(out, g.theta(i));
        out << ',';
        put(out, g.lon(j));
      }
      out << ',';
      put(out, graph.phi_at(g.index(i, j)));
      out << '\n';
    }
  }
}

RadialGraph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty graph file");
  const SphericalGrid grid = parse_grid_header(line);
  std::vector<double> phi(grid.size());
  const std::size_t expected_fields = grid.dim() == 1 ? 2 : 3;
  std::size_t line_no = 1;
  for (int i = 0; i < grid.n_rows(); ++i) {
    for (int j = 0; j < grid.n_cols(); ++j) {
      ++line_no;
      if (!std::getline(in, line)) {
        throw FormatError("graph file truncated at line " + std::to_string(line_no));
      }
      std::vector<double> fields;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) fields.push_back(parse_double(cell, line_no));
      if (fields.size() != expected_fields) {
        throw FormatError("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(expected_fields) + " fields");
      }
      const double theta = grid.dim() == 1 ? grid.theta(j) : grid.theta(i);
      if (std::abs(fields[0] - theta) > 1e-12 ||
          (grid.dim() == 2 && std::abs(fields[1] - grid.lon(j)) > 1e-12)) {
        throw FormatError("line " + std::to_string(line_no) + ": node coordinates do not match the grid");
      }
      phi[grid.index(i, j)] = fields.back();
    }
  }
  return RadialGraph(grid, std::move(phi));
}

}  // namespace anisoflow
