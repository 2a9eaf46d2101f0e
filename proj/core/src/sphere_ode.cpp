#include "anisoflow/sphere_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace anisoflow {

double sphere_ode_rhs(const SpeedProfile& profile, double r, double tau) {
  const double gamma = profile.gamma();
  const double ka = profile.k() * profile.alpha();
  const double lambda = lambda_from_tau(profile, tau);
  const double g = eval_scaled(profile, lambda, r).g;
  return -gamma * std::pow(r, profile.beta() - ka) - gamma * g / std::pow(r, ka) + gamma * r;
}

double integrate_sphere_ode(const SpeedProfile& profile, double r0, double tau0, double tau1, int substeps) {
  if (substeps < 1) throw std::invalid_argument("integrate_sphere_ode: substeps must be >= 1");
  const double h = (tau1 - tau0) / substeps;
  double r = r0;
  for (int i = 0; i < substeps; ++i) {
    const double t = tau0 + i * h;
    const double k1 = sphere_ode_rhs(profile, r, t);
    const double k2 = sphere_ode_rhs(profile, r + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = sphere_ode_rhs(profile, r + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = sphere_ode_rhs(profile, r + h * k3, t + h);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return r;
}

namespace {

double require_excess(const SpeedProfile& profile, const char* who) {
  if (profile.regime() != Regime::Supercritical) {
    throw std::invalid_argument(std::string(who) + ": requires beta > 1 + k alpha");
  }
  return profile.excess();
}

double lower_exponent(const SpeedProfile& profile) { return profile.beta() - profile.beta_floor() - 1.0; }

}  // namespace

double closed_form_r2(const SpeedProfile& profile, double r0, double tau) {
  const double q = require_excess(profile, "closed_form_r2");
  const double w = 1.0 + (std::pow(r0, -q) - 1.0) * std::exp(-q * profile.gamma() * tau);
  return std::pow(w, -1.0 / q);
}

bool r1_resonant(const SpeedProfile& profile) {
  const double q = require_excess(profile, "r1_resonant");
  return std::abs(lower_exponent(profile) + q) <= SpeedProfile::kRegimeTol;
}

double closed_form_r1(const SpeedProfile& profile, double r0, double c_bound, double tau) {
  const double q = require_excess(profile, "closed_form_r1");
  const double gamma = profile.gamma();
  const double w0 = std::pow(r0, -q);
  const double decay = std::exp(-q * gamma * tau);
  double w;
  if (r1_resonant(profile)) {
    w = 1.0 + (w0 - 1.0 + q * c_bound * tau) * decay;
  } else {
    const double a = lower_exponent(profile);
    const double b = q * c_bound / ((a + q) * gamma);
    w = 1.0 + b * std::exp(a * gamma * tau) + (w0 - 1.0 - b) * decay;
  }
  return std::pow(w, -1.0 / q);
}

PdeOdeComparison pde_vs_ode_check(const SpeedProfile& profile, double r0, double tau_end, const SphericalGrid& grid,
                                  StepControl control) {
  control.t_end = tau_end;
  control.validate(profile);
  FlowState s = FlowState::initial(profile, RadialGraph::sphere(grid, r0));
  PdeOdeComparison out;
  out.trajectory.push_back({0.0, r0, r0});
  double r_ode = r0;
  const double tau_tol = 1e-12 * std::max(1.0, tau_end);
  while (tau_end - s.tau > tau_tol && s.step_count < control.max_steps) {
    const double tau0 = s.tau;
    s = step(s, control);
    r_ode = integrate_sphere_ode(profile, r_ode, tau0, s.tau, 8);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (double p : s.graph.phi()) {
      const double r = std::exp(p);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      sum += r;
    }
    const double mean = sum / static_cast<double>(s.graph.phi().size());
    out.max_relative_deviation = std::max(out.max_relative_deviation, std::abs(mean - r_ode) / r_ode);
    out.max_non_uniformity = std::max(out.max_non_uniformity, (hi - lo) / mean);
    out.trajectory.push_back({s.tau, mean, r_ode});
  }
  return out;
}

}  // namespace anisoflow
