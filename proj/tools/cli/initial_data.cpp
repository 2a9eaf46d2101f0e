#include "cli/initial_data.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <string>

namespace anisoflow::cli {

double basis_value(int dim, const std::string& name, double theta, double lon) {
  if (name == "const") return 1.0;
  std::smatch m;
  if (dim == 1) {
    static const std::regex trig(R"((cos|sin)(\d+))");
    if (std::regex_match(name, m, trig)) {
      const double k = std::stod(m[2]);
      return m[1] == "cos" ? std::cos(k * theta) : std::sin(k * theta);
    }
  } else {
    static const std::regex ylm(R"(Y(\d+)_(-?\d+))");
    if (std::regex_match(name, m, ylm)) {
      const unsigned l = static_cast<unsigned>(std::stoul(m[1]));
      const int mm = std::stoi(m[2]);
      const unsigned am = static_cast<unsigned>(std::abs(mm));
      if (am > l) throw std::invalid_argument("basis '" + name + "': |m| must not exceed l");
      const double p = std::assoc_legendre(l, am, std::cos(theta));
      if (mm > 0) return p * std::cos(mm * lon);
      if (mm < 0) return p * std::sin(-mm * lon);
      return p;
    }
  }
  throw std::invalid_argument("unknown basis function '" + name + "' for n = " + std::to_string(dim));
}

RadialGraph make_initial_graph(const SphericalGrid& grid, const InitialData& initial,
                               const std::filesystem::path& base_dir) {
  if (initial.kind == InitialKind::File) {
    std::filesystem::path p(initial.path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    std::ifstream in(p);
    if (!in) throw ConfigError({"[initial] path: cannot open '" + p.string() + "'"});
    RadialGraph g = [&] {
      try {
        return read_graph(in);
      } catch (const std::exception& e) {
        throw ConfigError({"[initial] path: " + std::string(e.what())});
      }
    }();
    if (!(g.grid() == grid)) throw ConfigError({"[initial] path: graph file grid does not match [grid]"});
    return g;
  }
  if (initial.kind == InitialKind::Sphere) {
    if (!(initial.r0 > 0.0) || !std::isfinite(initial.r0)) throw ConfigError({"[initial] r0 must be positive"});
    return RadialGraph::sphere(grid, initial.r0);
  }
  std::vector<double> phi(grid.size());
  for (int i = 0; i < grid.n_rows(); ++i) {
    for (int j = 0; j < grid.n_cols(); ++j) {
      const double theta = grid.dim() == 1 ? grid.theta(j) : grid.theta(i);
      const double lon = grid.dim() == 1 ? 0.0 : grid.lon(j);
      double v = 0.0;
      for (const FourierTerm& t : initial.terms) v += t.coefficient * basis_value(grid.dim(), t.name, theta, lon);
      const std::size_t idx = grid.index(i, j);
      if (initial.target == FourierTarget::R) {
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw ConfigError({"[initial] coefficients: r = " + std::to_string(v) + " is not positive at node " +
                             std::to_string(idx)});
        }
        phi[idx] = std::log(v);
      } else {
        if (!std::isfinite(v) || !std::isfinite(std::exp(v)) || std::exp(v) <= 0.0) {
          throw ConfigError({"[initial] coefficients: phi = " + std::to_string(v) + " gives no finite positive r at node " +
                             std::to_string(idx)});
        }
        phi[idx] = v;
      }
    }
  }
  return RadialGraph(grid, std::move(phi));
}

}  // namespace anisoflow::cli
