#pragma once

// Explicit integration of the normalized radial-graph flow
//
//   d phi / d tau = -A sigma_k(kappa)^alpha + gamma,
//   A = e^{(beta-1) phi} rho + (rho / r) lambda^beta g(r / lambda),
//
// with lambda = exp(gamma tau). Time stepping is classical RK4 under a
// parabolic step restriction recomputed from the current field.

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "anisoflow/diagnostics.hpp"
#include "anisoflow/grid.hpp"
#include "anisoflow/speed_profile.hpp"

namespace anisoflow {

struct LambdaMaps {
  double lambda = 1.0;
  double tau = 0.0;
};

/// lambda(t) and tau(t) of the normalization; t >= 0.
LambdaMaps lambda_maps(const SpeedProfile& profile, double t);
/// Inverse of tau(t).
double time_from_tau(const SpeedProfile& profile, double tau);
/// exp(gamma tau), equal to lambda(time_from_tau(tau)).
double lambda_from_tau(const SpeedProfile& profile, double tau);

enum class ConePolicy {
  Abort,    ///< any node with margin <= cone_eps throws ConeViolation
  Monitor,  ///< margin is reported only; allowed for k == 1, alpha == 1
};

const char* to_string(ConePolicy p) noexcept;

struct StepControl {
  double cfl = 0.2;
  double dt_max = 1e-2;
  double t_end = 10.0;  ///< final normalized time
  double sphericity_stop = 1e-3;
  std::int64_t max_steps = 10'000'000;
  std::int64_t record_every = 10;
  double cone_eps = 1e-10;
  ConePolicy cone_policy = ConePolicy::Abort;
  /// Polar filter cap angle (n = 2); 0 disables the filter.
  double polar_cap = std::numbers::pi / 4;
  bool skip_validation = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate(const SpeedProfile& profile) const;

  friend bool operator==(const StepControl&, const StepControl&) = default;
};

struct FlowState {
  double tau = 0.0;
  RadialGraph graph;
  double lambda = 1.0;
  std::int64_t step_count = 0;
  double last_dt = 0.0;
  SpeedProfile profile;

  static FlowState initial(const SpeedProfile& profile, RadialGraph graph);
};

struct RhsEvaluation {
  std::vector<double> dphi;
  double stiffness = 0.0;    ///< max over nodes of the parabolic coefficient, metric-weighted
  double cone_margin = 0.0;  ///< min over nodes of min_{j<=k} sigma_j
  std::size_t margin_node = 0;
};

/// Right-hand side at normalized time tau. Applies no filtering.
RhsEvaluation rhs(const SpeedProfile& profile, const RadialGraph& graph, double tau,
                  const StepControl& control = {});
RhsEvaluation rhs(const FlowState& state, const StepControl& control = {});

/// Step size the engine would take from a given evaluation.
double step_size(const FlowState& state, const RhsEvaluation& eval, const StepControl& control);

/// One RK4 step.
FlowState step(const FlowState& state, const StepControl& control);

enum class StopReason { TEnd, Sphericity, MaxSteps };
const char* to_string(StopReason r) noexcept;

struct RunResult {
  FlowState final_state;
  DiagnosticsSeries series;
  StopReason reason = StopReason::TEnd;
};

/// Integrates until t_end, sphericity_stop or max_steps. Records diagnostics
/// at the start, whenever step_count is a multiple of record_every, and at the
/// end. The profile is validated for its regime unless skip_validation.
RunResult run(const FlowState& initial, const StepControl& control);

/// The unnormalized flow at the state: t and phi - log lambda.
struct Unnormalized {
  double t = 0.0;
  RadialGraph graph;
};
Unnormalized unnormalize(const FlowState& state);

/// Oscillation r_max - r_min of a graph.
double oscillation(const RadialGraph& graph);

void write_profile(std::ostream& out, const SpeedProfile& profile);
SpeedProfile read_profile(std::istream& in);

/// Text checkpoint; every value at 17 significant digits so that resuming
/// reproduces the uninterrupted run exactly.
void write_checkpoint(std::ostream& out, const FlowState& state);
FlowState read_checkpoint(std::istream& in);

}  // namespace anisoflow
