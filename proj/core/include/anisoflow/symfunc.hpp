#pragma once

// Elementary symmetric polynomials of principal curvatures, their first
// derivatives, and membership in the k-convex cone
//   Gamma_k^+ = { kappa : sigma_1(kappa) > 0, ..., sigma_k(kappa) > 0 }.
//
// Dimensions up to 3 are supported for curvature vectors; the 3-dimensional
// path is only exercised by identity checks. Matrices are 1x1 or 2x2.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>

namespace anisoflow {

inline constexpr double kDefaultConeEps = 1e-10;

class CurvatureVector {
 public:
  static constexpr int kMaxDim = 3;

  CurvatureVector() = default;
  CurvatureVector(std::initializer_list<double> values);
  explicit CurvatureVector(std::span<const double> values);

  int dim() const noexcept { return n_; }
  double operator[](int i) const noexcept { return kappa_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) noexcept { return kappa_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const noexcept {
    return {kappa_.data(), static_cast<std::size_t>(n_)};
  }

  /// Copy with entry i removed (the "kappa | kappa_i" vector).
  CurvatureVector without(int i) const;

  friend bool operator==(const CurvatureVector&, const CurvatureVector&) = default;

 private:
  std::array<double, kMaxDim> kappa_{};
  int n_ = 0;
};

/// Symmetric n x n matrix, n in {1, 2}, stored as (xx, xy, yy).
class SymmetricMatrix {
 public:
  static constexpr double kSymmetryTol = 1e-10;

  SymmetricMatrix() = default;
  static SymmetricMatrix scalar(double a);
  static SymmetricMatrix two(double xx, double xy, double yy);
  /// Row-major general entries; throws std::invalid_argument when
  /// |a01 - a10| exceeds kSymmetryTol * (1 + max|a_ij|).
  static SymmetricMatrix from_entries(int n, std::span<const double> row_major);

  int dim() const noexcept { return n_; }
  double xx() const noexcept { return xx_; }
  double xy() const noexcept { return xy_; }
  double yy() const noexcept { return yy_; }
  double trace() const noexcept { return n_ == 1 ? xx_ : xx_ + yy_; }
  double det() const noexcept { return n_ == 1 ? xx_ : xx_ * yy_ - xy_ * xy_; }

  /// Eigenvalues in descending order (closed form).
  CurvatureVector eigenvalues() const;

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  int n_ = 0;
  double xx_ = 0.0;
  double xy_ = 0.0;
  double yy_ = 0.0;
};

/// sigma_k(kappa); requires 1 <= k <= n.
double sigma_k(const CurvatureVector& kappa, int k);

/// sigma_j for any j >= 0: sigma_0 = 1 and sigma_j = 0 for j > n.
double sigma_any(const CurvatureVector& kappa, int j) noexcept;

/// d sigma_k / d kappa_i = sigma_{k-1}(kappa | kappa_i); requires 1 <= k <= n.
CurvatureVector sigma_k_partials(const CurvatureVector& kappa, int k);

struct ConeMembership {
  bool inside = false;
  /// min_{j<=k} sigma_j(kappa), unnormalized.
  double margin = 0.0;
};

/// Strict membership: inside iff margin > cone_eps.
ConeMembership in_gamma_k_plus(const CurvatureVector& kappa, int k,
                               double cone_eps = kDefaultConeEps);

struct MatrixSigma {
  double value = 0.0;
  CurvatureVector eigenvalues;
};

MatrixSigma sigma_k_of_matrix(const SymmetricMatrix& w, int k);

/// Binomial coefficient C(n, k) as a double.
double binomial(int n, int k) noexcept;

}  // namespace anisoflow
