// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "anisoflow/diagnostics.hpp"
#include "anisoflow/errors.hpp"
#include "anisoflow/flow_engine.hpp"
#include "anisoflow/speed_profile.hpp"
#include "anisoflow/sphere_ode.hpp"
#include "anisoflow/symfunc.hpp"
#include "anisoflow/weingarten.hpp"
#include "oracles/brute_sigma.hpp"
#include "oracles/ellipse.hpp"
#include "oracles/scalar_rk4.hpp"

using namespace anisoflow;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    ok = ok && cond;
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? "" : " [not met]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.4e", v); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double column_min(const DiagnosticsSeries& s, RecordField f) {
  const auto c = s.column(f);
  return *std::min_element(c.begin(), c.end());
}

// ------------------------------------------------------------------ AC-1

Outcome ac1() {
  Outcome o;
  double worst = 0.0;
  int cases = 0;
  for (int n = 1; n <= 2; ++n) {
    const SphericalGrid grid = n == 1 ? SphericalGrid::circle(256) : SphericalGrid::sphere(64, 128);
    for (int k = 1; k <= n; ++k) {
      for (double alpha : {1.0 / k, 1.0, 2.0}) {
        const SpeedProfile p = SpeedProfile::make(n, k, alpha, 1.0 + k * alpha, GSpec::zero());
        for (double r0 : {0.5, 1.0, 1.7}) {
          worst = std::max(worst, max_abs(rhs(p, RadialGraph::sphere(grid, r0), 0.0).dphi));
          ++cases;
        }
      }
    }
  }
  o.require(worst <= 1e-10, std::to_string(cases) + " spheres, max|rhs| = " + sci(worst) + " (<= 1e-10)");
  return o;
}

// ------------------------------------------------------------------ AC-2

Outcome ac2() {
  Outcome o;
  StepControl c;
  c.cfl = 0.2;
  const SpeedProfile p = SpeedProfile::make(1, 1, 1.0, 3.0, GSpec::zero());
  // Upper closed form equals 4/3 at tau = log 2 from r0 = 2.
  const double tau = std::log(2.0);
  const PdeOdeComparison a = pde_vs_ode_check(p, 2.0, tau, SphericalGrid::circle(256), c);
  const double r_end = a.trajectory.back().r_pde;
  const double gap = std::abs(r_end - 4.0 / 3.0) / (4.0 / 3.0);
  o.require(std::abs(a.trajectory.back().tau - tau) <= 1e-12, "final tau " + fmt("%.15g", a.trajectory.back().tau));
  o.require(gap <= 1e-4, "g=0: |r - 4/3| / (4/3) = " + sci(gap) + " (<= 1e-4)");
  o.require(a.max_non_uniformity <= 1e-8, "non-uniformity " + sci(a.max_non_uniformity) + " (<= 1e-8)");

  // Monomial g with l = floor(beta) + 1 against an independent RK4 in tau.
  const SpeedProfile pm = SpeedProfile::make(1, 1, 1.0, 3.0, GSpec::monomial(4.0));
  const PdeOdeComparison b = pde_vs_ode_check(pm, 2.0, tau, SphericalGrid::circle(256), c);
  auto ode = [](double t, double r) {
    const double lambda = std::exp(t);
    return -r * r - lambda * lambda * lambda * std::pow(r / lambda, 4.0) / r + r;
  };
  const double r_ref = oracle::rk4(ode, 2.0, 0.0, b.trajectory.back().tau, 100000);
  const double gap_m = std::abs(b.trajectory.back().r_pde - r_ref) / r_ref;
  o.require(gap_m <= 1e-4 && b.max_relative_deviation <= 1e-4,
            "monomial: end gap " + sci(gap_m) + ", max deviation " + sci(b.max_relative_deviation) + " (<= 1e-4)");
  o.require(b.max_non_uniformity <= 1e-8, "monomial non-uniformity " + sci(b.max_non_uniformity));
  return o;
}

// ------------------------------------------------------------------ AC-3 / AC-4 runs

RadialGraph circle_cos2(int n) {
  const SphericalGrid grid = SphericalGrid::circle(n);
  std::vector<double> phi(grid.size());
  for (int j = 0; j < n; ++j) phi[static_cast<std::size_t>(j)] = std::log(1.0 + 0.3 * std::cos(2.0 * grid.theta(j)));
  return RadialGraph(grid, phi);
}

RadialGraph zonal_p2(int n_lat, int n_lon) {
  const SphericalGrid grid = SphericalGrid::sphere(n_lat, n_lon);
  std::vector<double> phi(grid.size());
  for (int i = 0; i < n_lat; ++i) {
    const double x = std::cos(grid.theta(i));
    for (int j = 0; j < n_lon; ++j) phi[grid.index(i, j)] = std::log(1.0 + 0.15 * (1.5 * x * x - 0.5));
  }
  return RadialGraph(grid, phi);
}

struct FlowRuns {
  std::optional<RunResult> circle;  // monitored run of the curve
  std::optional<RunResult> surface;
};

Outcome ac3(FlowRuns& runs) {
  Outcome o;
  const SpeedProfile p = SpeedProfile::make(1, 1, 1.0, 2.0, GSpec::zero());
  const FlowState s0 = FlowState::initial(p, circle_cos2(512));
  StepControl c;
  c.cfl = 0.2;
  c.t_end = 50.0;
  c.sphericity_stop = 1e-3;

  // Enforced cone: the criterion asks for a positive margin throughout.
  try {
    const RunResult r = run(s0, c);
    const double m = column_min(r.series, &DiagnosticsRecord::cone_margin);
    o.require(m > 0.0, "cone margin min " + sci(m));
  } catch (const ConeViolation& e) {
    o.require(false, "cone margin positive throughout: " + std::string(e.what()));
  }

  // The remaining clauses on the same data with the margin monitored.
  c.cone_policy = ConePolicy::Monitor;
  runs.circle = run(s0, c);
  const RunResult& r = *runs.circle;
  const double osc = oscillation(r.final_state.graph);
  o.require(r.reason == StopReason::Sphericity && osc < 1e-3, "monitored run: final oscillation " + sci(osc) +
                                                                   " at tau " + fmt("%.4g", r.final_state.tau));
  const DecayFit fit = fit_tail(r.series, &DiagnosticsRecord::osc);
  o.require(fit.rate <= -0.1, "tail decay rate " + fmt("%.4f", fit.rate) + " (<= -0.1)");
  const double u = column_min(r.series, &DiagnosticsRecord::u_min);
  o.require(u > 0.0, "min u " + sci(u));
  const double phi_cap = column_min(r.series, &DiagnosticsRecord::phi_min_cap);
  o.require(phi_cap > 0.0, "min Phi " + sci(phi_cap));
  const double margin = column_min(r.series, &DiagnosticsRecord::cone_margin);
  o.require(margin > 0.0, "monitored cone margin min " + sci(margin));
  const double inc = max_increase(r.series, &DiagnosticsRecord::r_max);
  o.require(inc <= 1e-9, "r_max max increase " + sci(inc) + " (<= 1e-9)");
  return o;
}

Outcome ac4(FlowRuns& runs) {
  Outcome o;
  const SpeedProfile p = SpeedProfile::make(2, 2, 1.0, 4.0, GSpec::exp_flat(1.0));
  StepControl c;
  c.cfl = 0.2;
  c.t_end = 6.0;
  c.sphericity_stop = 1e-14;  // keep going well past 1e-3 so the radius settles
  c.record_every = 20;
  try {
    runs.surface = run(FlowState::initial(p, zonal_p2(64, 128)), c);
  } catch (const Error& e) {
    o.require(false, std::string("run aborted: ") + e.what());
    return o;
  }
  const RunResult& r = *runs.surface;
  double tau_below = kInf;
  for (const DiagnosticsRecord& rec : r.series.records()) {
    if (rec.osc < 1e-3) {
      tau_below = rec.tau;
      break;
    }
  }
  const double osc = oscillation(r.final_state.graph);
  o.require(tau_below < kInf && osc < 1e-3,
            "oscillation < 1e-3 from tau " + fmt("%.4g", tau_below) + ", final " + sci(osc));
  double mean = 0.0;
  for (double v : r.final_state.graph.phi()) mean += std::exp(v);
  mean /= static_cast<double>(r.final_state.graph.phi().size());
  o.require(std::abs(mean - 1.0) <= 2e-2,
            "radius at tau " + fmt("%.3g", r.final_state.tau) + " = " + fmt("%.6f", mean) + " (within 2e-2 of 1)");
  o.require(column_min(r.series, &DiagnosticsRecord::cone_margin) > 0.0, "cone margin positive");
  o.detail += "; " + std::to_string(r.final_state.step_count) + " steps";
  return o;
}

// ------------------------------------------------------------------ AC-5

struct RandomGraph {
  int dim = 1;
  std::vector<double> c;
  double operator()(double theta, double lon) const {
    if (dim == 1) {
      double v = 0.0;
      for (int m = 1; m <= 4; ++m) v += c[2 * (m - 1)] * std::cos(m * theta) + c[2 * m - 1] * std::sin(m * theta);
      return v;
    }
    const double x = std::sin(theta) * std::cos(lon), y = std::sin(theta) * std::sin(lon), z = std::cos(theta);
    const double b[8] = {x, y, z, x * z, y * y - z * z, x * y, 3 * z * z - 1, y * z * x};
    double v = 0.0;
    for (int i = 0; i < 8; ++i) v += c[static_cast<std::size_t>(i)] * b[i];
    return v;
  }
};

RadialGraph sample(const RandomGraph& f, const SphericalGrid& grid) {
  std::vector<double> phi(grid.size());
  for (int i = 0; i < grid.n_rows(); ++i) {
    for (int j = 0; j < grid.n_cols(); ++j) {
      phi[grid.index(i, j)] = grid.dim() == 1 ? f(grid.theta(j), 0.0) : f(grid.theta(i), grid.lon(j));
    }
  }
  return RadialGraph(grid, phi);
}

// Max curvature gap between the graph formulas and the embedding oracle, split
// into an equatorial band and the polar caps (n = 2).
std::pair<double, double> gap(const RadialGraph& g) {
  const WeingartenField a = weingarten(g);
  const WeingartenField b = embedding_oracle(g);
  const SphericalGrid& grid = g.grid();
  double band = 0.0, caps = 0.0;
  for (int i = 0; i < grid.n_rows(); ++i) {
    const bool in_band = grid.dim() == 1 || std::abs(grid.theta(i) - std::numbers::pi / 2) < 1.2;
    for (int j = 0; j < grid.n_cols(); ++j) {
      const std::size_t idx = grid.index(i, j);
      for (int q = 0; q < grid.dim(); ++q) {
        const double d = std::abs(a.nodes[idx].kappa[q] - b.nodes[idx].kappa[q]);
        (in_band ? band : caps) = std::max(in_band ? band : caps, d);
      }
    }
  }
  return {band, caps};
}

double slope(const std::vector<double>& e) {
  // Least squares of -log2 e against level.
  const double n = static_cast<double>(e.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double x = static_cast<double>(i), y = -std::log2(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome ac5() {
  Outcome o;
  std::mt19937_64 rng(20260516);
  std::uniform_real_distribution<double> u(-0.07, 0.07);
  for (int dim = 1; dim <= 2; ++dim) {
    double worst = kInf, worst_caps = kInf;
    for (int t = 0; t < 5; ++t) {
      RandomGraph f{dim, std::vector<double>(8)};
      for (double& v : f.c) v = u(rng);
      std::vector<double> band, caps;
      for (int level = 0; level < 4; ++level) {
        const int m = 32 << level;
        const auto e = gap(sample(f, dim == 1 ? SphericalGrid::circle(m) : SphericalGrid::sphere(m / 2, m)));
        band.push_back(e.first);
        caps.push_back(e.second);
      }
      worst = std::min(worst, slope(band));
      if (dim == 2) worst_caps = std::min(worst_caps, slope(caps));
    }
    o.require(worst >= 1.8, "n=" + std::to_string(dim) + " slope " + fmt("%.3f", worst) + " (>= 1.8)");
    if (dim == 2) o.detail += "; polar caps slope " + fmt("%.3f", worst_caps) + " (reported)";
  }
  const SphericalGrid grid = SphericalGrid::circle(512);
  std::vector<double> phi(grid.size());
  for (int j = 0; j < 512; ++j) phi[static_cast<std::size_t>(j)] = std::log(oracle::ellipse_radius(2.0, 1.0, grid.theta(j)));
  const WeingartenField w = weingarten(RadialGraph(grid, phi));
  double err = 0.0;
  for (int j = 0; j < 512; ++j) {
    const double exact = oracle::ellipse_curvature(2.0, 1.0, grid.theta(j));
    err = std::max(err, std::abs(w.nodes[static_cast<std::size_t>(j)].kappa[0] - exact));
  }
  o.require(err <= 5e-3, "ellipse N=512 error " + sci(err) + " (<= 5e-3)");
  return o;
}

// ------------------------------------------------------------------ AC-6

std::vector<double> cone_point(std::mt19937_64& rng, int n, int k) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (;;) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = u(rng);
    bool inside = true;
    for (int j = 1; j <= k; ++j) inside = inside && oracle::brute_sigma(v, j) > 1e-6;
    if (inside) return v;
  }
}

Outcome ac6() {
  Outcome o;
  std::mt19937_64 rng(987654321);
  constexpr double tol = 1e-10;
  constexpr int per_case = 2000;  // 6 (n, k) cases -> 12000 samples per identity
  struct Count {
    long samples = 0, bad = 0;
    double worst = 0.0;
    void add(double rel) {
      ++samples;
      worst = std::max(worst, rel);
      if (rel > tol) ++bad;
    }
    std::string str(const char* name) const {
      return std::string(name) + " " + std::to_string(bad) + "/" + std::to_string(samples) + " (worst " + sci(worst) + ")";
    }
  } value, euler, quad, nm, largest;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (int s = 0; s < per_case; ++s) {
        const std::vector<double> v = cone_point(rng, n, k);
        const CurvatureVector kappa(std::span<const double>(v.data(), v.size()));
        const double sk = oracle::brute_sigma(v, k);
        value.add(std::abs(sigma_k(kappa, k) - sk) / std::abs(sk));
        const CurvatureVector d = sigma_k_partials(kappa, k);
        double e = 0, es = 0, q = 0, qs = 0;
        for (int i = 0; i < n; ++i) {
          const double bp = oracle::brute_partial(v, k, i);
          value.add(std::abs(d[i] - bp) / (std::abs(bp) + std::abs(sk)));
          e += d[i] * v[i];
          es += std::abs(d[i] * v[i]);
          q += d[i] * v[i] * v[i];
          qs += std::abs(d[i] * v[i] * v[i]);
        }
        euler.add(std::abs(e - k * sk) / (es + k * sk));
        const double h = oracle::brute_sigma(v, 1), sk1 = oracle::brute_sigma(v, k + 1);
        quad.add(std::abs(q - (h * sk - (k + 1) * sk1)) / (qs + std::abs(h * sk) + (k + 1) * std::abs(sk1)));
        // Newton-MacLaurin: (sigma_k / C(n,k))^{1/k} <= sigma_1 / n on the cone.
        const double lhs = std::pow(sk / binomial(n, k), 1.0 / k);
        nm.add(std::max(0.0, lhs - h / n) / (h / n));
        const double kmax = *std::max_element(v.begin(), v.end());
        const int imax = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
        const double lb = static_cast<double>(k) / n * sk;
        largest.add(std::max(0.0, lb - d[imax] * kmax) / lb);
      }
    }
  }
  o.require(value.bad == 0, value.str("sigma/partials vs subsets"));
  o.require(euler.bad == 0, euler.str("euler"));
  o.require(quad.bad == 0, quad.str("quadratic"));
  o.require(nm.bad == 0, nm.str("newton-maclaurin"));
  o.require(largest.bad == 0, largest.str("largest-curvature"));
  return o;
}

// ------------------------------------------------------------------ AC-7

Outcome ac7() {
  Outcome o;
  const std::vector<double> samples = default_validation_samples();
  auto expect = [&](const std::string& name, const SpeedProfile& p, std::optional<Condition> fails) {
    const ValidationReport rep = validate_profile(p, samples);
    const bool ok = fails ? (!rep.ok && rep.failed(*fails)) : rep.ok;
    o.require(ok, name + (rep.ok ? " admissible" : " rejected (" + rep.summary() + ")"));
  };
  expect("zero", SpeedProfile::make(1, 1, 1.0, 2.0, GSpec::zero()), std::nullopt);
  expect("bump(0.5,1)", SpeedProfile::make(1, 1, 1.0, 2.0, GSpec::bump(0.5, 1.0)), std::nullopt);
  expect("bump(0.5,2)", SpeedProfile::make(2, 2, 0.5, 2.0, GSpec::bump(0.5, 2.0)), std::nullopt);
  expect("expflat(1)", SpeedProfile::make(2, 2, 1.0, 4.0, GSpec::exp_flat(1.0)), std::nullopt);
  expect("expflat(2)", SpeedProfile::make(1, 1, 1.0, 3.5, GSpec::exp_flat(2.0)), std::nullopt);
  expect("monomial(l=4,beta=3.5)", SpeedProfile::make(1, 1, 1.0, 3.5, GSpec::monomial(4.0)), std::nullopt);
  expect("g=r", SpeedProfile::make(1, 1, 1.0, 2.0, GSpec::monomial(1.0)), Condition::GrowthRatio);
  expect("monomial(l=3,beta=3.5)", SpeedProfile::make(1, 1, 1.0, 3.5, GSpec::monomial(3.0)), Condition::FlatAtZero);
  return o;
}

// ------------------------------------------------------------------ AC-8

void chain(Outcome& o, const char* label, const DiagnosticsSeries& s) {
  double worst_ratio = 0.0;
  for (const DiagnosticsRecord& r : s.records()) {
    if (r.osc > 0.0) worst_ratio = std::max(worst_ratio, r.osc / (std::numbers::pi * r.grad_r_max));
  }
  o.require(worst_ratio <= 1.0, std::string(label) + ": max osc/(pi max|grad r|) " + fmt("%.4f", worst_ratio));
  const double inc = max_increase(s, &DiagnosticsRecord::grad_phi_max);
  o.require(inc <= 1e-9, std::string(label) + ": max|grad phi| largest increase " + sci(inc) + " (<= 1e-9)");
}

Outcome ac8(const FlowRuns& runs) {
  Outcome o;
  if (runs.circle) {
    chain(o, "curve (monitored)", runs.circle->series);
  } else {
    o.require(false, "curve run unavailable");
  }
  if (runs.surface) {
    chain(o, "surface", runs.surface->series);
  } else {
    o.require(false, "surface run unavailable");
  }
  return o;
}

}  // namespace

int main() {
  FlowRuns runs;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC-1", ac1},
      {"AC-2", ac2},
      {"AC-3", [&] { return ac3(runs); }},
      {"AC-4", [&] { return ac4(runs); }},
      {"AC-5", ac5},
      {"AC-6", ac6},
      {"AC-7", ac7},
      {"AC-8", [&] { return ac8(runs); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s  %s  [%.1f s]\n", name, o.ok ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
