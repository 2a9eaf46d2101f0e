#include "anisoflow/weingarten.hpp"

#include <cmath>
#include <string>

#include "anisoflow/errors.hpp"
#include "anisoflow/parallel.hpp"

namespace anisoflow {
namespace {

constexpr int kPad = 2;

// Field values extended by two ghost layers on every side.
class PaddedField {
 public:
  PaddedField(const SphericalGrid& grid, const std::vector<double>& values)
      : rows_(grid.dim() == 1 ? 1 : grid.n_lat() + 2 * kPad),
        cols_(grid.n_lon() + 2 * kPad),
        row_off_(grid.dim() == 1 ? 0 : kPad),
        data_(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_)) {
    const int n_lat = grid.n_rows();
    const int n_lon = grid.n_lon();
    for (int a = -row_off_; a < n_lat + row_off_; ++a) {
      for (int b = -kPad; b < n_lon + kPad; ++b) {
        int src_row = a;
        int src_col = b;
        if (a < 0) {
          src_row = -1 - a;
          src_col = b + n_lon / 2;
        } else if (a >= n_lat) {
          src_row = 2 * n_lat - 1 - a;
          src_col = b + n_lon / 2;
        }
        src_col = ((src_col % n_lon) + n_lon) % n_lon;
        at(a, b) = values[grid.index(src_row, src_col)];
      }
    }
  }

  double operator()(int row, int col) const noexcept {
    return data_[static_cast<std::size_t>(row + row_off_) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(col + kPad)];
  }

 private:
  double& at(int row, int col) noexcept {
    return data_[static_cast<std::size_t>(row + row_off_) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(col + kPad)];
  }

  int rows_;
  int cols_;
  int row_off_;
  std::vector<double> data_;
};

// 4th-order central stencils.
inline double d1(double m2, double m1, double p1, double p2, double h) {
  return ((m2 - p2) + 8.0 * (p1 - m1)) / (12.0 * h);
}
inline double d2(double m2, double m1, double c, double p1, double p2, double h) {
  return (16.0 * (m1 + p1) - (m2 + p2) - 30.0 * c) / (12.0 * h * h);
}

constexpr double kW[5] = {1.0, -8.0, 0.0, 8.0, -1.0};

NodeDerivatives circle_derivatives(const PaddedField& f, int j, double h) {
  NodeDerivatives d;
  d.grad[0] = d1(f(0, j - 2), f(0, j - 1), f(0, j + 1), f(0, j + 2), h);
  d.hess[0] = d2(f(0, j - 2), f(0, j - 1), f(0, j), f(0, j + 1), f(0, j + 2), h);
  return d;
}

NodeDerivatives sphere_derivatives(const PaddedField& f, int i, int j, double ht, double hl,
                                   double s, double c) {
  const double ft = d1(f(i - 2, j), f(i - 1, j), f(i + 1, j), f(i + 2, j), ht);
  const double fl = d1(f(i, j - 2), f(i, j - 1), f(i, j + 1), f(i, j + 2), hl);
  const double ftt = d2(f(i - 2, j), f(i - 1, j), f(i, j), f(i + 1, j), f(i + 2, j), ht);
  const double fll = d2(f(i, j - 2), f(i, j - 1), f(i, j), f(i, j + 1), f(i, j + 2), hl);
  double ftl = 0.0;
  for (int a = 0; a < 5; ++a) {
    if (kW[a] == 0.0) continue;
    double row = 0.0;
    for (int b = 0; b < 5; ++b) {
      if (kW[b] != 0.0) row += kW[b] * f(i + a - 2, j + b - 2);
    }
    ftl += kW[a] * row;
  }
  ftl /= 144.0 * ht * hl;

  NodeDerivatives d;
  d.grad = {ft, fl / s};
  const double h_tt = ftt;
  const double h_tl = ftl - (c / s) * fl;
  const double h_ll = fll + s * c * ft;
  d.hess = {h_tt, h_tl / s, h_ll / (s * s)};
  return d;
}

}  // namespace

std::vector<NodeDerivatives> covariant_derivatives(const RadialGraph& graph) {
  const SphericalGrid& grid = graph.grid();
  const PaddedField f(grid, graph.phi());
  std::vector<NodeDerivatives> out(grid.size());
  if (grid.dim() == 1) {
    const double h = grid.spacing();
    parallel_for(grid.size(), worker_count(), [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) out[j] = circle_derivatives(f, static_cast<int>(j), h);
    });
    return out;
  }
  const double ht = grid.spacing();
  const double hl = grid.lon_spacing();
  parallel_for(static_cast<std::size_t>(grid.n_lat()), worker_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t ii = b; ii < e; ++ii) {
      const int i = static_cast<int>(ii);
      const double s = std::sin(grid.theta(i));
      const double c = std::cos(grid.theta(i));
      for (int j = 0; j < grid.n_lon(); ++j) {
        out[grid.index(i, j)] = sphere_derivatives(f, i, j, ht, hl, s, c);
      }
    }
  });
  return out;
}

NodeGeometry weingarten_node(int dim, double phi, const NodeDerivatives& d) {
  NodeGeometry g;
  g.r = std::exp(phi);
  if (dim == 1) {
    const double p = d.grad[0];
    const double rho2 = 1.0 + p * p;
    g.rho = std::sqrt(rho2);
    g.grad_norm = std::abs(p);
    g.shape = SymmetricMatrix::scalar((1.0 - d.hess[0] / rho2) / (g.r * g.rho));
  } else {
    const double p0 = d.grad[0];
    const double p1 = d.grad[1];
    const double p2 = p0 * p0 + p1 * p1;
    g.rho = std::sqrt(1.0 + p2);
    g.grad_norm = std::sqrt(p2);
    // Q^{-1} = I - c p p^T is the inverse square root of I + p p^T.
    const double c = 1.0 / (g.rho * (g.rho + 1.0));
    const double q00 = 1.0 - c * p0 * p0;
    const double q01 = -c * p0 * p1;
    const double q11 = 1.0 - c * p1 * p1;
    const double h00 = d.hess[0], h01 = d.hess[1], h11 = d.hess[2];
    // T = Q^{-1} H
    const double t00 = q00 * h00 + q01 * h01;
    const double t01 = q00 * h01 + q01 * h11;
    const double t10 = q01 * h00 + q11 * h01;
    const double t11 = q01 * h01 + q11 * h11;
    // M = T Q^{-1}
    const double m00 = t00 * q00 + t01 * q01;
    const double m01 = 0.5 * ((t00 * q01 + t01 * q11) + (t10 * q00 + t11 * q01));
    const double m11 = t10 * q01 + t11 * q11;
    const double scale = 1.0 / (g.r * g.rho);
    g.shape = SymmetricMatrix::two(scale * (1.0 - m00), -scale * m01, scale * (1.0 - m11));
  }
  g.u = g.r / g.rho;
  g.kappa = g.shape.eigenvalues();
  for (int j = 1; j <= dim; ++j) g.sigma[static_cast<std::size_t>(j - 1)] = j == 1 ? g.shape.trace() : g.shape.det();
  return g;
}

WeingartenField weingarten(const RadialGraph& graph) {
  const auto derivs = covariant_derivatives(graph);
  WeingartenField field{graph.grid(), std::vector<NodeGeometry>(derivs.size())};
  const int dim = graph.grid().dim();
  parallel_for(derivs.size(), worker_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) field.nodes[i] = weingarten_node(dim, graph.phi_at(i), derivs[i]);
  });
  return field;
}

SymmetricMatrix spd_sqrt(const SymmetricMatrix& a) {
  if (a.dim() == 1) return SymmetricMatrix::scalar(std::sqrt(a.xx()));
  const double s = std::sqrt(a.det());
  const double t = std::sqrt(a.trace() + 2.0 * s);
  return SymmetricMatrix::two((a.xx() + s) / t, a.xy() / t, (a.yy() + s) / t);
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

NodeGeometry finish_oracle_node(int dim, const SymmetricMatrix& metric, const SymmetricMatrix& second,
                                double r, double u, std::size_t node) {
  const double tr = metric.trace();
  if (!(metric.det() > 1e-14 * tr * tr) || !(tr > 0.0)) throw SingularMetric(node);
  NodeGeometry g;
  g.r = r;
  g.u = u;
  g.rho = r / u;
  g.grad_norm = std::sqrt(std::max(0.0, g.rho * g.rho - 1.0));
  if (dim == 1) {
    g.shape = SymmetricMatrix::scalar(second.xx() / metric.xx());
  } else {
    const SymmetricMatrix p = spd_sqrt(metric);
    const double det = p.det();
    const double i00 = p.yy() / det, i01 = -p.xy() / det, i11 = p.xx() / det;
    const double b00 = second.xx(), b01 = second.xy(), b11 = second.yy();
    // P^{-1} b P^{-1}
    const double t00 = i00 * b00 + i01 * b01;
    const double t01 = i00 * b01 + i01 * b11;
    const double t10 = i01 * b00 + i11 * b01;
    const double t11 = i01 * b01 + i11 * b11;
    g.shape = SymmetricMatrix::two(t00 * i00 + t01 * i01,
                                   0.5 * ((t00 * i01 + t01 * i11) + (t10 * i00 + t11 * i01)),
                                   t10 * i01 + t11 * i11);
  }
  g.kappa = g.shape.eigenvalues();
  for (int j = 1; j <= dim; ++j) g.sigma[static_cast<std::size_t>(j - 1)] = j == 1 ? g.shape.trace() : g.shape.det();
  return g;
}

}  // namespace

WeingartenField embedding_oracle(const RadialGraph& graph) {
  const SphericalGrid& grid = graph.grid();
  const PaddedField f(grid, graph.phi());
  WeingartenField field{grid, std::vector<NodeGeometry>(grid.size())};

  if (grid.dim() == 1) {
    const double h = grid.spacing();
    auto point = [&](int j) -> Vec3 {
      const double t = h * j;
      const double r = std::exp(f(0, j));
      return {r * std::cos(t), r * std::sin(t), 0.0};
    };
    for (int j = 0; j < grid.n_lon(); ++j) {
      const Vec3 xm = point(j - 1), x0 = point(j), xp = point(j + 1);
      const Vec3 xt = scale(sub(xp, xm), 1.0 / (2.0 * h));
      const Vec3 xtt = scale(add(sub(xp, scale(x0, 2.0)), xm), 1.0 / (h * h));
      const double speed = std::sqrt(dot(xt, xt));
      // Outward normal of a counter-clockwise curve: tangent rotated clockwise.
      Vec3 normal = {xt[1] / speed, -xt[0] / speed, 0.0};
      if (dot(normal, x0) < 0.0) normal = scale(normal, -1.0);
      const double r = std::sqrt(dot(x0, x0));
      field.nodes[static_cast<std::size_t>(j)] = finish_oracle_node(
          1, SymmetricMatrix::scalar(dot(xt, xt)), SymmetricMatrix::scalar(-dot(xtt, normal)), r,
          dot(x0, normal), static_cast<std::size_t>(j));
    }
    return field;
  }

  const double ht = grid.spacing();
  const double hl = grid.lon_spacing();
  // Ghost rows use the reflected polar angle with the mapped radius, which is
  // the same point of R^3.
  auto point = [&](int i, int j) -> Vec3 {
    const double t = (i + 0.5) * ht;
    const double l = hl * j;
    const double r = std::exp(f(i, j));
    return {r * std::sin(t) * std::cos(l), r * std::sin(t) * std::sin(l), r * std::cos(t)};
  };
  for (int i = 0; i < grid.n_lat(); ++i) {
    const double s = std::sin(grid.theta(i));
    for (int j = 0; j < grid.n_lon(); ++j) {
      const Vec3 x0 = point(i, j);
      const Vec3 xtp = point(i + 1, j), xtm = point(i - 1, j);
      const Vec3 xlp = point(i, j + 1), xlm = point(i, j - 1);
      const Vec3 xt = scale(sub(xtp, xtm), 1.0 / (2.0 * ht));
      const Vec3 xl = scale(sub(xlp, xlm), 1.0 / (2.0 * hl));
      const Vec3 xtt = scale(add(sub(xtp, scale(x0, 2.0)), xtm), 1.0 / (ht * ht));
      const Vec3 xll = scale(add(sub(xlp, scale(x0, 2.0)), xlm), 1.0 / (hl * hl));
      const Vec3 xtl = scale(add(sub(point(i + 1, j + 1), point(i + 1, j - 1)),
                                 sub(point(i - 1, j - 1), point(i - 1, j + 1))),
                             1.0 / (4.0 * ht * hl));
      Vec3 normal = cross(xt, xl);
      const double nn = std::sqrt(dot(normal, normal));
      const std::size_t node = grid.index(i, j);
      if (!(nn > 0.0)) throw SingularMetric(node);
      normal = scale(normal, 1.0 / nn);
      if (dot(normal, x0) < 0.0) normal = scale(normal, -1.0);
      // Coordinate forms converted to the orthonormal round frame.
      const SymmetricMatrix metric =
          SymmetricMatrix::two(dot(xt, xt), dot(xt, xl) / s, dot(xl, xl) / (s * s));
      const SymmetricMatrix second =
          SymmetricMatrix::two(-dot(xtt, normal), -dot(xtl, normal) / s, -dot(xll, normal) / (s * s));
      field.nodes[node] =
          finish_oracle_node(2, metric, second, std::sqrt(dot(x0, x0)), dot(x0, normal), node);
    }
  }
  return field;
}

}  // namespace anisoflow
