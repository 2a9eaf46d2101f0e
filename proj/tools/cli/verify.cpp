#include "cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

#include "anisoflow/flow_engine.hpp"
#include "anisoflow/sphere_ode.hpp"
#include "anisoflow/weingarten.hpp"

namespace anisoflow::cli {

bool SuiteResult::ok() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.ok; });
}

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr std::uint64_t kSeed = 0x5eed2026;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Uniform draws in [-1, 3]^n times a log-uniform scale, kept when inside Gamma_k^+.
CurvatureVector cone_sample(std::mt19937_64& rng, int n, int k) {
  std::uniform_real_distribution<double> entry(-1.0, 3.0);
  std::uniform_real_distribution<double> expo(-1.0, 1.0);
  while (true) {
    double v[3];
    const double scale = std::pow(10.0, expo(rng));
    for (int i = 0; i < n; ++i) v[i] = scale * entry(rng);
    CurvatureVector kappa(std::span<const double>(v, static_cast<std::size_t>(n)));
    if (in_gamma_k_plus(kappa, k, 0.0).inside) return kappa;
  }
}

CurvatureVector sorted_desc(const CurvatureVector& kappa) {
  double v[3];
  for (int i = 0; i < kappa.dim(); ++i) v[i] = kappa[i];
  std::sort(v, v + kappa.dim(), std::greater<>());
  return CurvatureVector(std::span<const double>(v, static_cast<std::size_t>(kappa.dim())));
}

struct Tally {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst = 0.0;

  void add(double rel) {
    ++samples;
    worst = std::max(worst, rel);
    if (rel > kIdentityTol) ++violations;
  }

  CheckLine line(const std::string& name) const {
    return {name, violations == 0, worst,
            std::to_string(samples) + " samples, " + std::to_string(violations) + " violations, worst relative residual " +
                sci(worst)};
  }
};

}  // namespace

SuiteResult verify_symfunc(const VerifyHooks& hooks, int samples_per_case) {
  std::mt19937_64 rng(kSeed);
  Tally euler, quadratic, nm_upper, nm_lower, largest, matrix;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (int s = 0; s < samples_per_case; ++s) {
        const CurvatureVector kappa = cone_sample(rng, n, k);
        const CurvatureVector d = hooks.partials(kappa, k);
        const double sk = sigma_k(kappa, k);
        double lhs = 0.0, scale = 0.0, lhs2 = 0.0, scale2 = 0.0;
        for (int i = 0; i < n; ++i) {
          lhs += d[i] * kappa[i];
          scale += std::abs(d[i] * kappa[i]);
          lhs2 += d[i] * kappa[i] * kappa[i];
          scale2 += std::abs(d[i] * kappa[i] * kappa[i]);
        }
        euler.add(std::abs(lhs - k * sk) / (scale + k * std::abs(sk)));
        const double s1 = sigma_k(kappa, 1);
        const double skp1 = sigma_any(kappa, k + 1);
        const double rhs2 = s1 * sk - (k + 1) * skp1;
        quadratic.add(std::abs(lhs2 - rhs2) / (scale2 + std::abs(s1 * sk) + (k + 1) * std::abs(skp1) + 1e-300));

        const double mean_k = sk / binomial(n, k);
        const double lower = n * std::pow(mean_k, 1.0 / k);
        nm_lower.add(std::max(0.0, lower - s1) / std::max(std::abs(s1), 1e-300));

        const CurvatureVector desc = sorted_desc(kappa);
        const double lhs3 = hooks.partials(desc, k)[0] * desc[0];
        const double rhs3 = static_cast<double>(k) / n * sk;
        largest.add(std::max(0.0, rhs3 - lhs3) / std::max(std::abs(rhs3), 1e-300));

        if (k < n) {
          const CurvatureVector kp = cone_sample(rng, n, k + 1);
          const double a = sigma_k(kp, k + 1);
          const double b = binomial(n, k + 1) * std::pow(sigma_k(kp, k) / binomial(n, k), (k + 1.0) / k);
          nm_upper.add(std::max(0.0, a - b) / std::max(std::abs(b), 1e-300));
        }
        if (n <= 2) {
          std::uniform_real_distribution<double> u(-2.0, 2.0);
          const SymmetricMatrix w = n == 1 ? SymmetricMatrix::scalar(u(rng)) : SymmetricMatrix::two(u(rng), u(rng), u(rng));
          const MatrixSigma ms = sigma_k_of_matrix(w, k);
          const double direct = k == 1 ? w.trace() : w.det();
          matrix.add(std::abs(ms.value - direct) / (std::abs(direct) + std::abs(w.xx() * w.yy()) + w.xy() * w.xy() + 1e-300));
          const double via_eigen = sigma_k(ms.eigenvalues, k);
          matrix.add(std::abs(via_eigen - direct) /
                     (std::abs(direct) + std::abs(w.xx()) + std::abs(w.yy()) + std::abs(w.xy()) + 1e-300));
        }
      }
    }
  }
  return {"symfunc",
          {euler.line("euler identity"), quadratic.line("quadratic identity"),
           nm_upper.line("newton-maclaurin upper"), nm_lower.line("newton-maclaurin lower"),
           largest.line("largest-curvature bound"), matrix.line("matrix form vs eigenvalues")}};
}

// ------------------------------------------------------------ oracle suite

namespace {

struct SmoothGraph {
  int dim;
  std::vector<double> coeff;  // per mode

  double operator()(double theta, double lon) const {
    if (dim == 1) {
      double v = 0.0;
      for (int m = 1; m <= 3; ++m) v += coeff[2 * (m - 1)] * std::cos(m * theta) + coeff[2 * m - 1] * std::sin(m * theta);
      return v;
    }
    // Low-degree polynomial in the Cartesian coordinates of the unit sphere.
    const double x = std::sin(theta) * std::cos(lon);
    const double y = std::sin(theta) * std::sin(lon);
    const double z = std::cos(theta);
    const double b[9] = {x, y, z, x * y, y * z, z * x, x * x - y * y, 3 * z * z - 1, x * y * z};
    double v = 0.0;
    for (int i = 0; i < 9; ++i) v += coeff[static_cast<std::size_t>(i)] * b[i];
    return v;
  }
};

SmoothGraph random_graph(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(-0.08, 0.08);
  SmoothGraph g{dim, std::vector<double>(dim == 1 ? 6 : 9)};
  for (double& c : g.coeff) c = u(rng);
  return g;
}

RadialGraph sample(const SmoothGraph& f, const SphericalGrid& grid) {
  std::vector<double> phi(grid.size());
  for (int i = 0; i < grid.n_rows(); ++i) {
    for (int j = 0; j < grid.n_cols(); ++j) {
      phi[grid.index(i, j)] = grid.dim() == 1 ? f(grid.theta(j), 0.0) : f(grid.theta(i), grid.lon(j));
    }
  }
  return RadialGraph(grid, std::move(phi));
}

struct BandErrors {
  double equatorial = 0.0;
  double polar = 0.0;
};

BandErrors oracle_gap(const RadialGraph& g) {
  const WeingartenField a = weingarten(g);
  const WeingartenField b = embedding_oracle(g);
  const SphericalGrid& grid = g.grid();
  BandErrors e;
  for (int i = 0; i < grid.n_rows(); ++i) {
    const bool equatorial = grid.dim() == 1 || std::abs(grid.theta(i) - std::numbers::pi / 2) < 1.2;
    for (int j = 0; j < grid.n_cols(); ++j) {
      const std::size_t idx = grid.index(i, j);
      double d = 0.0;
      for (int c = 0; c < grid.dim(); ++c) d = std::max(d, std::abs(a.nodes[idx].kappa[c] - b.nodes[idx].kappa[c]));
      (equatorial ? e.equatorial : e.polar) = std::max(equatorial ? e.equatorial : e.polar, d);
    }
  }
  return e;
}

// Least-squares slope of -log2(err) against the refinement level.
double refinement_slope(const std::vector<double>& err) {
  const double n = static_cast<double>(err.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    mx += static_cast<double>(i);
    my += -std::log2(err[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    sxx += (static_cast<double>(i) - mx) * (static_cast<double>(i) - mx);
    sxy += (static_cast<double>(i) - mx) * (-std::log2(err[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace

SuiteResult verify_oracle() {
  SuiteResult res{"oracle", {}};
  std::mt19937_64 rng(kSeed + 1);
  for (int dim = 1; dim <= 2; ++dim) {
    double worst_slope = std::numeric_limits<double>::infinity();
    double worst_polar = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 5; ++trial) {
      const SmoothGraph f = random_graph(rng, dim);
      std::vector<double> eq, pole;
      for (int level = 0; level < 4; ++level) {
        const int base = 32 << level;
        const SphericalGrid grid = dim == 1 ? SphericalGrid::circle(base) : SphericalGrid::sphere(base / 2, base);
        const BandErrors e = oracle_gap(sample(f, grid));
        eq.push_back(e.equatorial);
        pole.push_back(e.polar);
      }
      worst_slope = std::min(worst_slope, refinement_slope(eq));
      if (dim == 2) worst_polar = std::min(worst_polar, refinement_slope(pole));
    }
    res.checks.push_back({"refinement slope n=" + std::to_string(dim), worst_slope >= 1.8, worst_slope,
                          "min over 5 graphs of the fitted slope " + sci(worst_slope) + " (need >= 1.8)"});
    if (dim == 2) {
      res.checks.push_back({"pole-band slope n=2", worst_polar >= 1.0, worst_polar,
                            "min fitted slope near the poles " + sci(worst_polar) + " (need >= 1.0)"});
    }
  }
  // Ellipse with semi-axes 2 and 1 against its parametric curvature.
  const double a = 2.0, b = 1.0;
  const SphericalGrid grid = SphericalGrid::circle(512);
  std::vector<double> phi(grid.size());
  for (int j = 0; j < grid.n_cols(); ++j) {
    const double t = grid.theta(j);
    phi[static_cast<std::size_t>(j)] = std::log(a * b / std::sqrt(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t)));
  }
  const WeingartenField w = weingarten(RadialGraph(grid, phi));
  double err = 0.0;
  for (int j = 0; j < grid.n_cols(); ++j) {
    const double th = grid.theta(j);
    const double t = std::atan2(a * std::sin(th), b * std::cos(th));
    const double exact = a * b / std::pow(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t), 1.5);
    err = std::max(err, std::abs(w.nodes[static_cast<std::size_t>(j)].kappa[0] - exact));
  }
  res.checks.push_back({"ellipse curvature N=512", err <= 5e-3, err, "max error " + sci(err) + " (need <= 5e-3)"});
  return res;
}

// ------------------------------------------------------------ sphere-ode suite

namespace {

// Lower comparison equation integrated directly.
double integrate_lower(const SpeedProfile& p, double r0, double c, double tau_end, int steps) {
  const double gamma = p.gamma();
  const double q = p.excess();
  const double a = p.beta() - std::floor(p.beta()) - 1.0;
  auto f = [&](double t, double r) { return -(gamma + c * std::exp(a * gamma * t)) * std::pow(r, q + 1.0) + gamma * r; };
  const double h = tau_end / steps;
  double r = r0;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const double k1 = f(t, r);
    const double k2 = f(t + h / 2, r + h / 2 * k1);
    const double k3 = f(t + h / 2, r + h / 2 * k2);
    const double k4 = f(t + h, r + h * k3);
    r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return r;
}

}  // namespace

SuiteResult verify_sphere_ode() {
  SuiteResult res{"sphere-ode", {}};
  auto add = [&](const std::string& name, double value, double tol, const std::string& what) {
    res.checks.push_back({name, value <= tol, value, what + " " + sci(value) + " (need <= " + sci(tol) + ")"});
  };

  const SpeedProfile crit = SpeedProfile::make(2, 2, 1.0, 3.0, GSpec::zero());
  double fixed = 0.0;
  for (double r : {0.5, 1.0, 1.7}) fixed = std::max(fixed, std::abs(sphere_ode_rhs(crit, r, 0.7)));
  add("critical spheres are fixed", fixed, 1e-14, "max |rhs|");

  const SpeedProfile p3 = SpeedProfile::make(1, 1, 1.0, 3.0, GSpec::zero());
  add("rhs at r=2", std::abs(sphere_ode_rhs(p3, 2.0, 0.0) + 2.0), 1e-14, "|rhs + 2|");
  add("upper closed form at log 2", std::abs(closed_form_r2(p3, 2.0, std::log(2.0)) - 4.0 / 3.0), 1e-14,
      "|r2 - 4/3|");

  double reduce = 0.0, ode_gap = 0.0, limit = 0.0;
  for (double beta : {3.0, 3.5}) {
    const SpeedProfile p = SpeedProfile::make(1, 1, 1.0, beta, GSpec::zero());
    for (double tau : {0.0, 0.3, 1.0, 4.0}) {
      reduce = std::max(reduce, std::abs(closed_form_r1(p, 1.7, 0.0, tau) - closed_form_r2(p, 1.7, tau)));
    }
    for (double r0 : {0.6, 2.0}) {
      for (double tau : {0.5, 2.0}) {
        ode_gap = std::max(ode_gap, std::abs(closed_form_r1(p, r0, 1.0, tau) - integrate_lower(p, r0, 1.0, tau, 4000)));
      }
      limit = std::max({limit, std::abs(closed_form_r1(p, r0, 1.0, 1e3) - 1.0), std::abs(closed_form_r2(p, r0, 1e3) - 1.0)});
    }
  }
  add("lower form with C=0 equals upper", reduce, 1e-14, "max difference");
  add("lower form vs RK4 (both branches)", ode_gap, 1e-8, "max difference");
  add("limits at tau=1e3", limit, 1e-6, "max |r - 1|");

  const PdeOdeComparison cmp = pde_vs_ode_check(p3, 2.0, 0.2, SphericalGrid::circle(64));
  add("grid solution vs sphere equation", cmp.max_relative_deviation, 1e-4, "max relative deviation");
  add("grid solution stays round", cmp.max_non_uniformity, 1e-8, "max non-uniformity");
  return res;
}

// ------------------------------------------------------------ profiles suite

SuiteResult verify_profiles() {
  SuiteResult res{"profiles", {}};
  const std::vector<double> samples = default_validation_samples();
  auto expect = [&](const std::string& name, const SpeedProfile& p, bool should_pass, std::optional<Condition> failing) {
    const ValidationReport rep = validate_profile(p, samples);
    bool ok = rep.ok == should_pass;
    if (failing) ok = ok && rep.failed(*failing);
    std::string detail = (rep.ok ? "admissible" : "rejected") + std::string("; ") + rep.summary();
    res.checks.push_back({name, ok, rep.worst_violation, detail});
  };
  expect("zero (critical)", SpeedProfile::make(1, 1, 1.0, 2.0, GSpec::zero()), true, std::nullopt);
  expect("bump eps=0.5 p=1", SpeedProfile::make(1, 1, 1.0, 2.0, GSpec::bump(0.5, 1.0)), true, std::nullopt);
  expect("bump eps=0.5 p=2", SpeedProfile::make(1, 1, 1.0, 2.0, GSpec::bump(0.5, 2.0)), true, std::nullopt);
  expect("expflat p=1", SpeedProfile::make(2, 2, 1.0, 4.0, GSpec::exp_flat(1.0)), true, std::nullopt);
  expect("expflat p=2", SpeedProfile::make(2, 2, 1.0, 4.0, GSpec::exp_flat(2.0)), true, std::nullopt);
  expect("monomial l=floor(beta)+1", SpeedProfile::make(1, 1, 1.0, 3.0, GSpec::monomial(4.0)), true, std::nullopt);
  expect("g=r rejected (growth ratio)", SpeedProfile::make(1, 1, 1.0, 2.0, GSpec::monomial(1.0)), false,
         Condition::GrowthRatio);
  expect("monomial l=floor(beta) rejected (flatness)", SpeedProfile::make(1, 1, 1.0, 3.5, GSpec::monomial(3.0)),
         false, Condition::FlatAtZero);
  return res;
}

SuiteResult verify_profile_report(const SpeedProfile& profile) {
  std::vector<double> samples = default_validation_samples();
  if (profile.g().kind == GKind::Tabulated && profile.g().table) {
    const double hi = profile.g().table->r.back();
    std::erase_if(samples, [hi](double r) { return r > hi; });
  }
  const ValidationReport rep = validate_profile(profile, samples);
  SuiteResult res{std::string("profile ") + to_string(profile.g().kind) + " (" +
                      (profile.regime() == Regime::Critical ? "critical" : "supercritical") + ")",
                  {}};
  for (const ConditionCheck& c : rep.checks) {
    res.checks.push_back({to_string(c.condition), c.ok, c.worst_violation,
                          "worst margin " + sci(c.worst_violation) + " at r = " + sci(c.location)});
  }
  return res;
}

SuiteResult verify_suite(const std::string& name, const VerifyHooks& hooks) {
  if (name == "symfunc") return verify_symfunc(hooks);
  if (name == "oracle") return verify_oracle();
  if (name == "sphere-ode") return verify_sphere_ode();
  if (name == "profiles") return verify_profiles();
  throw std::invalid_argument("unknown suite '" + name + "'");
}

void print_suite(std::ostream& out, const SuiteResult& suite) {
  out << "suite " << suite.name << ": " << (suite.ok() ? "PASS" : "FAIL") << '\n';
  for (const CheckLine& c : suite.checks) {
    out << "  [" << (c.ok ? "pass" : "FAIL") << "] " << c.name << ": " << c.detail << '\n';
  }
}

}  // namespace anisoflow::cli
