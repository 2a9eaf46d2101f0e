#include "anisoflow/flow_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "anisoflow/errors.hpp"
#include "anisoflow/parallel.hpp"
#include "anisoflow/polar_filter.hpp"
#include "anisoflow/symfunc.hpp"
#include "anisoflow/weingarten.hpp"

namespace anisoflow {

// ---------------------------------------------------------------- time maps

LambdaMaps lambda_maps(const SpeedProfile& profile, double t) {
  if (t < 0.0) throw std::invalid_argument("lambda_maps: t must be >= 0");
  const double gamma = profile.gamma();
  if (profile.regime() == Regime::Critical) return {std::exp(gamma * t), t};
  const double q = profile.excess();
  const double x = q * gamma * t;
  return {std::pow(1.0 + x, 1.0 / q), std::log1p(x) / (q * gamma)};
}

double time_from_tau(const SpeedProfile& profile, double tau) {
  if (profile.regime() == Regime::Critical) return tau;
  const double qg = profile.excess() * profile.gamma();
  return std::expm1(qg * tau) / qg;
}

double lambda_from_tau(const SpeedProfile& profile, double tau) { return std::exp(profile.gamma() * tau); }

const char* to_string(ConePolicy p) noexcept { return p == ConePolicy::Abort ? "abort" : "monitor"; }

const char* to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::TEnd: return "t_end";
    case StopReason::Sphericity: return "sphericity_stop";
    case StopReason::MaxSteps: return "max_steps";
  }
  return "?";
}

void StepControl::validate(const SpeedProfile& profile) const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  positive(dt_max, "dt_max");
  positive(t_end, "t_end");
  positive(sphericity_stop, "sphericity_stop");
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
  if (record_every <= 0) throw std::invalid_argument("record_every must be positive");
  if (!(cone_eps >= 0.0)) throw std::invalid_argument("cone_eps must be >= 0");
  if (!(polar_cap >= 0.0 && polar_cap <= std::numbers::pi / 2)) {
    throw std::invalid_argument("polar_cap must lie in [0, pi/2]");
  }
  if (cone_policy == ConePolicy::Monitor && !(profile.k() == 1 && profile.alpha() == 1.0)) {
    throw std::invalid_argument("cone_policy = monitor requires k = 1 and alpha = 1");
  }
}

FlowState FlowState::initial(const SpeedProfile& profile, RadialGraph graph) {
  if (graph.grid().dim() != profile.n()) {
    throw std::invalid_argument("graph dimension does not match profile n");
  }
  return FlowState{0.0, std::move(graph), 1.0, 0, 0.0, profile};
}

// ---------------------------------------------------------------- rhs

namespace {

struct NodeOut {
  double dphi = 0.0;
  double stiffness = 0.0;
  double margin = 0.0;
  std::exception_ptr failure;
};

// Largest eigenvalue of d sigma_k / d kappa.
double max_partial(const CurvatureVector& kappa, int k) {
  if (k == 1) return 1.0;
  const CurvatureVector d = sigma_k_partials(kappa, k);
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < d.dim(); ++i) m = std::max(m, d[i]);
  return m;
}

}  // namespace

RhsEvaluation rhs(const SpeedProfile& profile, const RadialGraph& graph, double tau, const StepControl& control) {
  const SphericalGrid& grid = graph.grid();
  const WeingartenField field = weingarten(graph);
  const double lambda = lambda_from_tau(profile, tau);
  const int k = profile.k();
  const double alpha = profile.alpha();
  const double gamma = profile.gamma();
  const bool abort_outside = control.cone_policy == ConePolicy::Abort;

  // Direction weight 1 + (h_theta / (s h_lon))^2 per row.
  std::vector<double> weight(static_cast<std::size_t>(grid.n_rows()), 1.0);
  if (grid.dim() == 2) {
    const PolarFilter filter(grid, control.polar_cap);
    for (int i = 0; i < grid.n_rows(); ++i) {
      const double ratio = grid.spacing() / (filter.effective_sine(i) * grid.lon_spacing());
      weight[static_cast<std::size_t>(i)] = 1.0 + ratio * ratio;
    }
  }

  std::vector<NodeOut> out(grid.size());
  parallel_for(grid.size(), worker_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const NodeGeometry& g = field.nodes[i];
      NodeOut& o = out[i];
      o.margin = g.sigma[0];
      for (int j = 2; j <= k; ++j) o.margin = std::min(o.margin, g.sigma[static_cast<std::size_t>(j - 1)]);
      if (abort_outside && !(o.margin > control.cone_eps)) continue;
      ScaledSpeed f;
      try {
        f = eval_scaled(profile, lambda, g.r);
      } catch (...) {
        o.failure = std::current_exception();
        continue;
      }
      const double sk = g.sigma[static_cast<std::size_t>(k - 1)];
      const double a = g.rho / g.r * f.f;
      o.dphi = -a * sigma_power(sk, alpha) + gamma;
      const double sk_pow = alpha == 1.0 ? 1.0 : std::pow(sk, alpha - 1.0);
      const std::size_t row = grid.dim() == 1 ? 0 : i / static_cast<std::size_t>(grid.n_lon());
      o.stiffness = alpha * a * sk_pow * std::abs(max_partial(g.kappa, k)) / (g.r * g.rho) * weight[row];
    }
  });

  RhsEvaluation ev;
  ev.dphi.resize(grid.size());
  ev.cone_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].margin < ev.cone_margin) {
      ev.cone_margin = out[i].margin;
      ev.margin_node = i;
    }
  }
  if (abort_outside && !(ev.cone_margin > control.cone_eps)) {
    throw ConeViolation(ev.margin_node, ev.cone_margin, tau);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].failure) std::rethrow_exception(out[i].failure);
    if (!std::isfinite(out[i].dphi) || !std::isfinite(out[i].stiffness)) throw NonFiniteRhs(i, tau);
    ev.dphi[i] = out[i].dphi;
    ev.stiffness = std::max(ev.stiffness, out[i].stiffness);
  }
  return ev;
}

RhsEvaluation rhs(const FlowState& state, const StepControl& control) {
  return rhs(state.profile, state.graph, state.tau, control);
}

double step_size(const FlowState& state, const RhsEvaluation& eval, const StepControl& control) {
  const double h = state.graph.grid().spacing();
  double dt = control.dt_max;
  if (eval.stiffness > 0.0) dt = std::min(dt, control.cfl * h * h / eval.stiffness);
  return std::min(dt, control.t_end - state.tau);
}

// ---------------------------------------------------------------- stepping

FlowState step(const FlowState& state, const StepControl& control) {
  const SphericalGrid& grid = state.graph.grid();
  const PolarFilter filter(grid, control.polar_cap);
  const std::size_t n = grid.size();

  RhsEvaluation k1 = rhs(state, control);
  const double remaining = control.t_end - state.tau;
  const double dt = step_size(state, k1, control);
  const bool last = dt >= remaining;
  if (dt < 1e-14 && !last) throw StepTooSmall(dt, state.tau);
  if (!(dt > 0.0)) throw StepTooSmall(dt, state.tau);

  const std::vector<double>& phi = state.graph.phi();
  auto stage = [&](const std::vector<double>& base_k, double frac, double tau) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = phi[i] + frac * dt * base_k[i];
    RhsEvaluation ev = rhs(state.profile, RadialGraph(grid, std::move(y)), tau, control);
    filter.apply(ev.dphi);
    return ev.dphi;
  };

  filter.apply(k1.dphi);
  const std::vector<double> d2 = stage(k1.dphi, 0.5, state.tau + 0.5 * dt);
  const std::vector<double> d3 = stage(d2, 0.5, state.tau + 0.5 * dt);
  const std::vector<double> d4 = stage(d3, 1.0, state.tau + dt);

  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = phi[i] + dt / 6.0 * (k1.dphi[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);
  }
  FlowState s{last ? control.t_end : state.tau + dt, RadialGraph(grid, std::move(next)), 0.0,
              state.step_count + 1, dt, state.profile};
  s.lambda = lambda_from_tau(s.profile, s.tau);
  return s;
}

double oscillation(const RadialGraph& graph) {
  const auto [lo, hi] = std::minmax_element(graph.phi().begin(), graph.phi().end());
  return std::exp(*hi) - std::exp(*lo);
}

namespace {

std::vector<double> validation_samples(const SpeedProfile& profile) {
  std::vector<double> s = default_validation_samples();
  if (profile.g().kind == GKind::Tabulated && profile.g().table) {
    const double hi = profile.g().table->r.back();
    std::erase_if(s, [hi](double r) { return r > hi; });
  }
  return s;
}

DiagnosticsRecord record(const FlowState& s) {
  return measure(s.profile, weingarten(s.graph), s.tau, s.lambda, s.last_dt);
}

}  // namespace

RunResult run(const FlowState& initial, const StepControl& control) {
  control.validate(initial.profile);
  if (!control.skip_validation) {
    const std::vector<double> samples = validation_samples(initial.profile);
    const ValidationReport report = validate_profile(initial.profile, samples);
    if (!report.ok) throw std::invalid_argument("g is not admissible for the regime: " + report.summary());
  }
  RunResult res{initial, {}, StopReason::TEnd};
  FlowState& s = res.final_state;
  rhs(s, control);  // cone check on the initial data
  res.series.push(record(s));
  const double tau_tol = 1e-12 * std::max(1.0, control.t_end);
  while (true) {
    if (oscillation(s.graph) < control.sphericity_stop) {
      res.reason = StopReason::Sphericity;
      break;
    }
    if (control.t_end - s.tau <= tau_tol) {
      res.reason = StopReason::TEnd;
      break;
    }
    if (s.step_count >= control.max_steps) {
      res.reason = StopReason::MaxSteps;
      break;
    }
    s = step(s, control);
    if (s.step_count % control.record_every == 0) res.series.push(record(s));
  }
  if (res.series.back().tau < s.tau) res.series.push(record(s));
  return res;
}

Unnormalized unnormalize(const FlowState& state) {
  const double log_lambda = state.profile.gamma() * state.tau;
  std::vector<double> phi = state.graph.phi();
  for (double& v : phi) v -= log_lambda;
  return {time_from_tau(state.profile, state.tau), RadialGraph(state.graph.grid(), std::move(phi))};
}

// ---------------------------------------------------------------- checkpoints

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "tag key=value key=value ..." -> map; the tag must match.
std::map<std::string, std::string> parse_tagged(const std::string& line, const std::string& tag) {
  std::istringstream ss(line);
  std::string word;
  if (!(ss >> word) || word != tag) throw FormatError("checkpoint: expected '" + tag + "' line, got '" + line + "'");
  std::map<std::string, std::string> kv;
  while (ss >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw FormatError("checkpoint: malformed field '" + word + "'");
    kv[word.substr(0, eq)] = word.substr(eq + 1);
  }
  return kv;
}

const std::string& field(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw FormatError("checkpoint: missing field '" + key + "'");
  return it->second;
}

double to_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("checkpoint: bad number '" + s + "'");
  }
}

long long to_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("checkpoint: bad integer '" + s + "'");
  }
}

std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("checkpoint: unexpected end of input");
  return line;
}

constexpr const char* kCheckpointMagic = "# anisoflow checkpoint 1";

}  // namespace

void write_profile(std::ostream& out, const SpeedProfile& p) {
  const GSpec& g = p.g();
  const std::size_t rows = g.table ? g.table->r.size() : 0;
  out << "profile n=" << p.n() << " k=" << p.k() << " alpha=" << num(p.alpha()) << " beta=" << num(p.beta())
      << '\n';
  out << "g kind=" << to_string(g.kind) << " epsilon=" << num(g.epsilon) << " p=" << num(g.p) << " l=" << num(g.l)
      << " rows=" << rows << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    out << num(g.table->r[i]) << ',' << num(g.table->g[i]) << ',' << num(g.table->dg[i]) << '\n';
  }
}

SpeedProfile read_profile(std::istream& in) {
  const auto pk = parse_tagged(next_line(in), "profile");
  const auto gk = parse_tagged(next_line(in), "g");
  GSpec g;
  try {
    g.kind = parse_gkind(field(gk, "kind"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
  g.epsilon = to_double(field(gk, "epsilon"));
  g.p = to_double(field(gk, "p"));
  g.l = to_double(field(gk, "l"));
  const long long rows = to_int(field(gk, "rows"));
  if (rows < 0) throw FormatError("checkpoint: negative table size");
  if (rows > 0) {
    std::ostringstream table;
    for (long long i = 0; i < rows; ++i) table << next_line(in) << '\n';
    std::istringstream tin(table.str());
    g.table = std::make_shared<const GTable>(GTable::read(tin));
  }
  return SpeedProfile::make(static_cast<int>(to_int(field(pk, "n"))), static_cast<int>(to_int(field(pk, "k"))),
                            to_double(field(pk, "alpha")), to_double(field(pk, "beta")), std::move(g));
}

void write_checkpoint(std::ostream& out, const FlowState& s) {
  out << kCheckpointMagic << '\n';
  write_profile(out, s.profile);
  out << "state tau=" << num(s.tau) << " lambda=" << num(s.lambda) << " step_count=" << s.step_count
      << " last_dt=" << num(s.last_dt) << '\n';
  write_graph(out, s.graph);
}

FlowState read_checkpoint(std::istream& in) {
  if (next_line(in) != kCheckpointMagic) throw FormatError("checkpoint: missing header line");
  SpeedProfile profile = read_profile(in);
  const auto st = parse_tagged(next_line(in), "state");
  const double tau = to_double(field(st, "tau"));
  const double lambda = to_double(field(st, "lambda"));
  const long long steps = to_int(field(st, "step_count"));
  const double last_dt = to_double(field(st, "last_dt"));
  RadialGraph graph = read_graph(in);
  if (graph.grid().dim() != profile.n()) throw FormatError("checkpoint: graph dimension does not match profile");
  return FlowState{tau, std::move(graph), lambda, steps, last_dt, std::move(profile)};
}

}  // namespace anisoflow
