#include "anisoflow/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace anisoflow {

CurvatureVector::CurvatureVector(std::initializer_list<double> values)
    : CurvatureVector(std::span<const double>(values.begin(), values.size())) {}

CurvatureVector::CurvatureVector(std::span<const double> values) {
  if (values.empty() || values.size() > static_cast<std::size_t>(kMaxDim)) {
    throw std::invalid_argument("curvature vector must have 1 to 3 entries");
  }
  n_ = static_cast<int>(values.size());
  std::copy(values.begin(), values.end(), kappa_.begin());
}

CurvatureVector CurvatureVector::without(int i) const {
  CurvatureVector out;
  out.n_ = n_ - 1;
  int w = 0;
  for (int j = 0; j < n_; ++j) {
    if (j != i) out.kappa_[static_cast<std::size_t>(w++)] = kappa_[static_cast<std::size_t>(j)];
  }
  return out;
}

SymmetricMatrix SymmetricMatrix::scalar(double a) {
  SymmetricMatrix m;
  m.n_ = 1;
  m.xx_ = a;
  return m;
}

SymmetricMatrix SymmetricMatrix::two(double xx, double xy, double yy) {
  SymmetricMatrix m;
  m.n_ = 2;
  m.xx_ = xx;
  m.xy_ = xy;
  m.yy_ = yy;
  return m;
}

SymmetricMatrix SymmetricMatrix::from_entries(int n, std::span<const double> a) {
  if (n == 1 && a.size() == 1) return scalar(a[0]);
  if (n != 2 || a.size() != 4) {
    throw std::invalid_argument("symmetric matrix must be 1x1 or 2x2");
  }
  const double scale = 1.0 + std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2]), std::abs(a[3])});
  if (std::abs(a[1] - a[2]) > kSymmetryTol * scale) {
    throw std::invalid_argument("matrix is not symmetric: |a01 - a10| = " +
                                std::to_string(std::abs(a[1] - a[2])));
  }
  return two(a[0], 0.5 * (a[1] + a[2]), a[3]);
}

CurvatureVector SymmetricMatrix::eigenvalues() const {
  if (n_ == 1) return CurvatureVector{xx_};
  const double mean = 0.5 * (xx_ + yy_);
  const double half_diff = 0.5 * (xx_ - yy_);
  const double rad = std::hypot(half_diff, xy_);
  return CurvatureVector{mean + rad, mean - rad};
}

double sigma_any(const CurvatureVector& kappa, int j) noexcept {
  const int n = kappa.dim();
  if (j == 0) return 1.0;
  if (j < 0 || j > n) return 0.0;
  switch (n) {
    case 1:
      return kappa[0];
    case 2:
      return j == 1 ? kappa[0] + kappa[1] : kappa[0] * kappa[1];
    default: {
      const double a = kappa[0], b = kappa[1], c = kappa[2];
      if (j == 1) return a + b + c;
      if (j == 2) return a * b + a * c + b * c;
      return a * b * c;
    }
  }
}

namespace {

void check_order(const CurvatureVector& kappa, int k) {
  if (k < 1 || k > kappa.dim()) {
    throw std::out_of_range("sigma_k: k = " + std::to_string(k) + " outside [1, " +
                            std::to_string(kappa.dim()) + "]");
  }
}

}  // namespace

double sigma_k(const CurvatureVector& kappa, int k) {
  check_order(kappa, k);
  return sigma_any(kappa, k);
}

CurvatureVector sigma_k_partials(const CurvatureVector& kappa, int k) {
  check_order(kappa, k);
  CurvatureVector out = kappa;
  for (int i = 0; i < kappa.dim(); ++i) {
    out[i] = kappa.dim() == 1 ? 1.0 : sigma_any(kappa.without(i), k - 1);
  }
  return out;
}

ConeMembership in_gamma_k_plus(const CurvatureVector& kappa, int k, double cone_eps) {
  check_order(kappa, k);
  double margin = sigma_any(kappa, 1);
  for (int j = 2; j <= k; ++j) margin = std::min(margin, sigma_any(kappa, j));
  return {margin > cone_eps, margin};
}

MatrixSigma sigma_k_of_matrix(const SymmetricMatrix& w, int k) {
  if (k < 1 || k > w.dim()) {
    throw std::out_of_range("sigma_k_of_matrix: k = " + std::to_string(k) + " outside [1, " +
                            std::to_string(w.dim()) + "]");
  }
  return {k == 1 ? w.trace() : w.det(), w.eigenvalues()};
}

double binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace anisoflow
