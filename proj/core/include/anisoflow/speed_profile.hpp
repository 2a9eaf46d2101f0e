#pragma once

// Speed profile f(r) = r^beta + g(r) of the curvature flow
//   dX/dt = -f(r) sigma_k^alpha nu,
// its rescaled evaluators lambda^beta f(r / lambda), lambda^{beta-1} f'(r / lambda),
// and numeric admissibility checks for g.
//
// Two regimes are distinguished:
//   critical       beta == 1 + k alpha  (normalization lambda = exp(gamma t))
//   supercritical  beta  > 1 + k alpha  (power-law normalization)

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace anisoflow {

enum class GKind { Zero, Bump, ExpFlat, Monomial, Tabulated };

enum class Regime { Critical, Supercritical };

/// Sampled g with caller-supplied derivative; evaluated by cubic Hermite
/// interpolation on [r.front(), r.back()].
struct GTable {
  std::vector<double> r;
  std::vector<double> g;
  std::vector<double> dg;

  /// Rows "r,g,dg"; lines starting with '#' are skipped.
  static GTable read(std::istream& in);
  static GTable load(const std::string& path);
};

struct GSpec {
  GKind kind = GKind::Zero;
  double epsilon = 0.0;  ///< Bump: g == 0 on [0, epsilon]
  double p = 1.0;        ///< Bump, ExpFlat exponent
  double l = 0.0;        ///< Monomial power
  std::shared_ptr<const GTable> table;

  static GSpec zero() { return {}; }
  /// r^{1+k alpha} exp(-(r - epsilon)^{-p}) for r > epsilon, 0 otherwise.
  static GSpec bump(double epsilon, double p);
  /// r^{1+k alpha} exp(-r^{-p}).
  static GSpec exp_flat(double p);
  /// r^l.
  static GSpec monomial(double l);
  static GSpec tabulated(GTable table);
};

/// Parameters and table contents compared by value.
bool operator==(const GSpec& a, const GSpec& b);

/// "zero", "bump", "expflat", "monomial", "tabulated".
const char* to_string(GKind kind) noexcept;
/// Inverse of to_string; throws std::invalid_argument on an unknown name.
GKind parse_gkind(const std::string& name);

struct GValue {
  double g = 0.0;
  double dg = 0.0;
};

struct ScaledSpeed {
  double g = 0.0;   ///< lambda^beta g(r / lambda)
  double dg = 0.0;  ///< lambda^{beta-1} g'(r / lambda)
  double f = 0.0;   ///< lambda^beta f(r / lambda) = r^beta + g
  double df = 0.0;  ///< lambda^{beta-1} f'(r / lambda) = beta r^{beta-1} + dg
};

class SpeedProfile {
 public:
  static constexpr double kLambdaCap = 1e100;
  static constexpr double kRegimeTol = 1e-12;

  /// Checks 1 <= k <= n <= 2 (n = 3 is accepted for identity checks),
  /// alpha > 0 with alpha == 1/k or alpha >= 1 when k >= 2,
  /// beta >= 1 + k alpha, and the parameters of g.
  /// Admissibility of g for the regime is checked separately.
  static SpeedProfile make(int n, int k, double alpha, double beta, GSpec g);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  /// C(n, k)^alpha.
  double gamma() const noexcept { return gamma_; }
  const GSpec& g() const noexcept { return g_; }
  Regime regime() const noexcept { return regime_; }
  /// beta - k alpha - 1 (zero in the critical regime).
  double excess() const noexcept { return regime_ == Regime::Critical ? 0.0 : beta_ - k_ * alpha_ - 1.0; }
  /// floor(beta).
  double beta_floor() const noexcept;

  friend bool operator==(const SpeedProfile&, const SpeedProfile&) = default;

 private:
  int n_ = 1;
  int k_ = 1;
  double alpha_ = 1.0;
  double beta_ = 2.0;
  double gamma_ = 1.0;
  GSpec g_;
  Regime regime_ = Regime::Critical;
};

/// g and g' at r >= 0.
GValue eval_g(const SpeedProfile& profile, double r);

/// Rescaled speed pieces for lambda >= 1. Flat kinds return exactly r^beta
/// once r / lambda lies in their zero region. Throws ScaleOverflow when
/// lambda exceeds kLambdaCap or the scaled g is not representable.
ScaledSpeed eval_scaled(const SpeedProfile& profile, double lambda, double r);

enum class Condition {
  Nonnegative,     ///< g >= 0
  VanishesAtZero,  ///< g(0) == 0
  FlatNearZero,    ///< g == 0 on an interval [0, eps]
  GrowthRatio,     ///< (1 + k alpha) g(r) / r <= g'(r)
  FlatAtZero,      ///< g(r) <= K r^{floor(beta)+1} near 0
};

const char* to_string(Condition c) noexcept;

struct ConditionCheck {
  Condition condition;
  bool ok = true;
  double worst_violation = 0.0;  ///< signed; positive means violated
  double location = 0.0;
};

struct ValidationReport {
  bool ok = true;
  double worst_violation = 0.0;
  double location = 0.0;
  std::vector<ConditionCheck> checks;

  const ConditionCheck* find(Condition c) const noexcept;
  bool failed(Condition c) const noexcept;
  std::string summary() const;
};

inline constexpr double kValidationTol = 1e-9;

/// 600 samples spanning [0.01, 3].
std::vector<double> default_validation_samples();

/// Admissibility in the critical regime: g >= 0, g == 0 near 0 and the growth
/// ratio condition. Requires profile.regime() == Regime::Critical.
ValidationReport validate_critical(const SpeedProfile& profile, std::span<const double> r_samples);

/// Admissibility in the supercritical regime: g >= 0, g(0) == 0, the growth
/// ratio condition and flatness to order floor(beta) at 0 (ratio test on the
/// decades below r_flat). Requires profile.regime() == Regime::Supercritical.
ValidationReport validate_supercritical(const SpeedProfile& profile, std::span<const double> r_samples,
                                        double r_flat = 0.1);

/// Dispatches on profile.regime().
ValidationReport validate_profile(const SpeedProfile& profile, std::span<const double> r_samples);

}  // namespace anisoflow
