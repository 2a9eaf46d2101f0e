#pragma once

// Round spheres stay round under the normalized flow; their radius obeys
//
//   dr/dtau = -gamma r^{beta - k alpha} - gamma lambda^beta g(r / lambda) r^{-k alpha} + gamma r,
//
// with lambda = exp(gamma tau). For beta > 1 + k alpha and g >= 0 it is
// bracketed by two explicitly solvable comparison equations (variable w = r^{-q},
// q = beta - k alpha - 1):
//
//   upper  dr/dtau = -gamma r^{q+1} + gamma r
//   lower  dr/dtau = -(gamma + C lambda^a) r^{q+1} + gamma r,   a = beta - floor(beta) - 1.

#include <vector>

#include "anisoflow/flow_engine.hpp"
#include "anisoflow/grid.hpp"
#include "anisoflow/speed_profile.hpp"

namespace anisoflow {

double sphere_ode_rhs(const SpeedProfile& profile, double r, double tau);

/// Classical RK4 for the sphere equation from (tau0, r0) to tau1 in `substeps` equal steps.
double integrate_sphere_ode(const SpeedProfile& profile, double r0, double tau0, double tau1, int substeps);

/// Solution of the upper comparison equation. Requires beta > 1 + k alpha.
double closed_form_r2(const SpeedProfile& profile, double r0, double tau);

/// Solution of the lower comparison equation with constant c_bound. The
/// resonant case a == -q has a secular term. Requires beta > 1 + k alpha.
double closed_form_r1(const SpeedProfile& profile, double r0, double c_bound, double tau);

/// True when the lower comparison equation is resonant (a == -q).
bool r1_resonant(const SpeedProfile& profile);

struct SphereTrajectoryPoint {
  double tau = 0.0;
  double r_pde = 0.0;  ///< mean radius of the grid solution
  double r_ode = 0.0;  ///< RK4 reference
};

struct PdeOdeComparison {
  double max_relative_deviation = 0.0;
  double max_non_uniformity = 0.0;  ///< max over steps of (r_max - r_min) / r_mean
  std::vector<SphereTrajectoryPoint> trajectory;
};

/// Runs the engine from the sphere of radius r0 up to tau_end and compares
/// the radius with the sphere equation integrated step by step (8 RK4
/// substeps per engine step).
PdeOdeComparison pde_vs_ode_check(const SpeedProfile& profile, double r0, double tau_end, const SphericalGrid& grid,
                                  StepControl control = {});

}  // namespace anisoflow
