#include "anisoflow/speed_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "anisoflow/errors.hpp"
#include "anisoflow/symfunc.hpp"

namespace anisoflow {
namespace {

// exp(-x) underflows to zero for x beyond this.
constexpr double kExpFlush = 745.0;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

GSpec GSpec::bump(double epsilon, double p) {
  GSpec s;
  s.kind = GKind::Bump;
  s.epsilon = epsilon;
  s.p = p;
  return s;
}

GSpec GSpec::exp_flat(double p) {
  GSpec s;
  s.kind = GKind::ExpFlat;
  s.p = p;
  return s;
}

GSpec GSpec::monomial(double l) {
  GSpec s;
  s.kind = GKind::Monomial;
  s.l = l;
  return s;
}

bool operator==(const GSpec& a, const GSpec& b) {
  if (a.kind != b.kind || a.epsilon != b.epsilon || a.p != b.p || a.l != b.l) return false;
  if (!a.table || !b.table) return a.table == b.table;
  return a.table->r == b.table->r && a.table->g == b.table->g && a.table->dg == b.table->dg;
}

const char* to_string(GKind kind) noexcept {
  switch (kind) {
    case GKind::Zero: return "zero";
    case GKind::Bump: return "bump";
    case GKind::ExpFlat: return "expflat";
    case GKind::Monomial: return "monomial";
    case GKind::Tabulated: return "tabulated";
  }
  return "?";
}

GKind parse_gkind(const std::string& name) {
  for (GKind k : {GKind::Zero, GKind::Bump, GKind::ExpFlat, GKind::Monomial, GKind::Tabulated}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown g kind '" + name + "'");
}

GSpec GSpec::tabulated(GTable table) {
  GSpec s;
  s.kind = GKind::Tabulated;
  s.table = std::make_shared<const GTable>(std::move(table));
  return s;
}

GTable GTable::read(std::istream& in) {
  GTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    double v[3];
    char c1 = 0, c2 = 0;
    if (!(ss >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ',' || c2 != ',') {
      throw FormatError("g table line " + std::to_string(line_no) + ": expected 'r,g,dg'");
    }
    if (!t.r.empty() && !(v[0] > t.r.back())) {
      throw FormatError("g table line " + std::to_string(line_no) + ": r must increase");
    }
    t.r.push_back(v[0]);
    t.g.push_back(v[1]);
    t.dg.push_back(v[2]);
  }
  if (t.r.size() < 2) throw FormatError("g table needs at least two rows");
  if (t.r.front() != 0.0) throw FormatError("g table must start at r = 0");
  return t;
}

GTable GTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open g table '" + path + "'");
  return read(in);
}

SpeedProfile SpeedProfile::make(int n, int k, double alpha, double beta, GSpec g) {
  if (n < 1 || n > 3) throw std::invalid_argument("n must be 1 or 2");
  if (k < 1 || k > n) throw std::invalid_argument("k must satisfy 1 <= k <= n");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (k >= 2 && !(std::abs(alpha - 1.0 / k) <= 1e-12 || alpha >= 1.0)) {
    throw std::invalid_argument("alpha must be 1/k or >= 1 for k >= 2");
  }
  const double critical = 1.0 + k * alpha;
  if (!std::isfinite(beta) || beta < critical - kRegimeTol * (1.0 + critical)) {
    throw std::invalid_argument("beta must be >= 1 + k*alpha = " + num(critical));
  }
  switch (g.kind) {
    case GKind::Zero:
      break;
    case GKind::Bump:
      if (!(g.epsilon > 0.0)) throw std::invalid_argument("g.epsilon must be positive");
      if (!(g.p > 0.0)) throw std::invalid_argument("g.p must be positive");
      break;
    case GKind::ExpFlat:
      if (!(g.p > 0.0)) throw std::invalid_argument("g.p must be positive");
      break;
    case GKind::Monomial:
      if (!(g.l > 0.0)) throw std::invalid_argument("g.l must be positive");
      break;
    case GKind::Tabulated:
      if (!g.table) throw std::invalid_argument("tabulated g needs a table");
      break;
  }
  SpeedProfile p;
  p.n_ = n;
  p.k_ = k;
  p.alpha_ = alpha;
  p.beta_ = beta;
  p.gamma_ = std::pow(binomial(n, k), alpha);
  p.g_ = std::move(g);
  p.regime_ = std::abs(beta - critical) <= kRegimeTol * (1.0 + critical) ? Regime::Critical
                                                                          : Regime::Supercritical;
  return p;
}

double SpeedProfile::beta_floor() const noexcept { return std::floor(beta_); }

namespace {

GValue eval_table(const GTable& t, double s) {
  if (s < t.r.front() || s > t.r.back()) {
    throw Error("tabulated g: r = " + num(s) + " outside [" + num(t.r.front()) + ", " + num(t.r.back()) + "]");
  }
  auto it = std::upper_bound(t.r.begin(), t.r.end(), s);
  std::size_t i = it == t.r.begin() ? 0 : static_cast<std::size_t>(it - t.r.begin()) - 1;
  i = std::min(i, t.r.size() - 2);
  const double h = t.r[i + 1] - t.r[i];
  const double x = (s - t.r[i]) / h;
  const double x2 = x * x, x3 = x2 * x;
  const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x;
  const double h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
  GValue v;
  v.g = h00 * t.g[i] + h10 * h * t.dg[i] + h01 * t.g[i + 1] + h11 * h * t.dg[i + 1];
  v.dg = (6 * x2 - 6 * x) / h * t.g[i] + (3 * x2 - 4 * x + 1) * t.dg[i] +
         (-6 * x2 + 6 * x) / h * t.g[i + 1] + (3 * x2 - 2 * x) * t.dg[i + 1];
  return v;
}

// exp(-E) and the pieces needed for the flat kinds; E = +inf means flat.
double flat_exponent(const SpeedProfile& p, double s) {
  const GSpec& g = p.g();
  if (g.kind == GKind::Bump) {
    if (s <= g.epsilon) return std::numeric_limits<double>::infinity();
    return std::pow(s - g.epsilon, -g.p);
  }
  if (s <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(s, -g.p);
}

// d/ds log of the non-power factor: g = s^e exp(-E(s)) => g' = g (e / s + dE)
double flat_log_slope(const SpeedProfile& p, double s) {
  const GSpec& g = p.g();
  const double x = g.kind == GKind::Bump ? s - g.epsilon : s;
  return g.p * std::pow(x, -g.p - 1.0);
}

double signed_exp(double sign, double log_mag) { return sign * std::exp(log_mag); }

}  // namespace

GValue eval_g(const SpeedProfile& profile, double r) {
  const GSpec& g = profile.g();
  const double e = 1.0 + profile.k() * profile.alpha();
  switch (g.kind) {
    case GKind::Zero:
      return {};
    case GKind::Bump:
    case GKind::ExpFlat: {
      const double big_e = flat_exponent(profile, r);
      if (!(big_e <= kExpFlush)) return {};
      const double w = std::exp(-big_e);
      const double gv = std::pow(r, e) * w;
      return {gv, w * std::pow(r, e - 1.0) * (e + r * flat_log_slope(profile, r))};
    }
    case GKind::Monomial:
      return {std::pow(r, g.l), g.l * std::pow(r, g.l - 1.0)};
    case GKind::Tabulated:
      return eval_table(*g.table, r);
  }
  return {};
}

ScaledSpeed eval_scaled(const SpeedProfile& profile, double lambda, double r) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("eval_scaled: lambda must be >= 1, got " + num(lambda));
  const double beta = profile.beta();
  const GSpec& g = profile.g();
  ScaledSpeed out;
  switch (g.kind) {
    case GKind::Zero:
      break;
    case GKind::Monomial: {
      const double c = std::pow(lambda, beta - g.l);
      out.g = c * std::pow(r, g.l);
      out.dg = g.l * c * std::pow(r, g.l - 1.0);
      break;
    }
    case GKind::Bump:
    case GKind::ExpFlat: {
      const double s = r / lambda;
      const double big_e = flat_exponent(profile, s);
      if (!(big_e <= kExpFlush)) break;
      const double e = 1.0 + profile.k() * profile.alpha();
      const double log_lambda = std::log(lambda);
      // lambda^beta s^e exp(-E) and lambda^{beta-1} s^{e-1} exp(-E) (e + s E'),
      // evaluated in log form so that large lambda cannot overflow early.
      out.g = std::exp(beta * log_lambda + e * std::log(s) - big_e);
      out.dg = std::exp((beta - 1.0) * log_lambda + (e - 1.0) * std::log(s) - big_e) *
               (e + s * flat_log_slope(profile, s));
      break;
    }
    case GKind::Tabulated: {
      if (lambda > SpeedProfile::kLambdaCap) throw ScaleOverflow(lambda, r);
      const GValue v = eval_table(*g.table, r / lambda);
      const double log_lambda = std::log(lambda);
      if (v.g != 0.0) out.g = signed_exp(v.g > 0 ? 1.0 : -1.0, beta * log_lambda + std::log(std::abs(v.g)));
      if (v.dg != 0.0) {
        out.dg = signed_exp(v.dg > 0 ? 1.0 : -1.0, (beta - 1.0) * log_lambda + std::log(std::abs(v.dg)));
      }
      break;
    }
  }
  if (!std::isfinite(out.g) || !std::isfinite(out.dg)) throw ScaleOverflow(lambda, r);
  out.f = std::pow(r, beta) + out.g;
  out.df = beta * std::pow(r, beta - 1.0) + out.dg;
  return out;
}

const char* to_string(Condition c) noexcept {
  switch (c) {
    case Condition::Nonnegative:
      return "g >= 0";
    case Condition::VanishesAtZero:
      return "g(0) = 0";
    case Condition::FlatNearZero:
      return "g = 0 on [0, eps]";
    case Condition::GrowthRatio:
      return "(1 + k alpha) g / r <= g'";
    case Condition::FlatAtZero:
      return "g flat to order floor(beta) at 0";
  }
  return "?";
}

const ConditionCheck* ValidationReport::find(Condition c) const noexcept {
  for (const auto& ch : checks) {
    if (ch.condition == c) return &ch;
  }
  return nullptr;
}

bool ValidationReport::failed(Condition c) const noexcept {
  const ConditionCheck* ch = find(c);
  return ch != nullptr && !ch->ok;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << (ok ? "ok" : "FAILED");
  for (const auto& ch : checks) {
    os << "; [" << to_string(ch.condition) << "] " << (ch.ok ? "ok" : "violated")
       << " worst=" << ch.worst_violation << " at r=" << ch.location;
  }
  return os.str();
}

std::vector<double> default_validation_samples() {
  std::vector<double> r(600);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 0.01 + (3.0 - 0.01) * static_cast<double>(i) / 599.0;
  return r;
}

namespace {

ConditionCheck check_nonnegative(const SpeedProfile& p, std::span<const double> rs) {
  ConditionCheck c{Condition::Nonnegative, true, -std::numeric_limits<double>::infinity(), 0.0};
  for (double r : rs) {
    const double v = -eval_g(p, r).g;
    if (v > c.worst_violation) {
      c.worst_violation = v;
      c.location = r;
    }
  }
  c.ok = c.worst_violation <= 0.0;
  return c;
}

ConditionCheck check_growth_ratio(const SpeedProfile& p, std::span<const double> rs) {
  const double e = 1.0 + p.k() * p.alpha();
  ConditionCheck c{Condition::GrowthRatio, true, -std::numeric_limits<double>::infinity(), 0.0};
  for (double r : rs) {
    if (!(r > 0.0)) continue;
    const GValue v = eval_g(p, r);
    const double lhs = e * v.g / r;
    const double viol = lhs - v.dg;
    if (viol > c.worst_violation) {
      c.worst_violation = viol;
      c.location = r;
    }
    if (viol > kValidationTol * (1.0 + std::abs(v.dg))) c.ok = false;
  }
  return c;
}

ConditionCheck check_vanishes_at_zero(const SpeedProfile& p) {
  const double g0 = eval_g(p, 0.0).g;
  return {Condition::VanishesAtZero, g0 == 0.0, std::abs(g0), 0.0};
}

ValidationReport finish(std::vector<ConditionCheck> checks) {
  ValidationReport rep;
  rep.checks = std::move(checks);
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (const auto& c : rep.checks) {
    if (!c.ok) rep.ok = false;
  }
  // Report the worst failing condition if any, otherwise the tightest one.
  for (const auto& c : rep.checks) {
    if (rep.ok == c.ok && c.worst_violation > rep.worst_violation) {
      rep.worst_violation = c.worst_violation;
      rep.location = c.location;
    }
  }
  return rep;
}

}  // namespace

ValidationReport validate_critical(const SpeedProfile& p, std::span<const double> rs) {
  if (p.regime() != Regime::Critical) {
    throw std::invalid_argument("validate_critical needs beta == 1 + k*alpha");
  }
  std::vector<ConditionCheck> checks;
  checks.push_back(check_nonnegative(p, rs));
  checks.push_back(check_vanishes_at_zero(p));

  // g must vanish identically on a neighbourhood of 0: on [0, epsilon] for
  // kinds that carry one, and at least up to the smallest positive sample.
  ConditionCheck flat{Condition::FlatNearZero, true, 0.0, 0.0};
  double smallest = std::numeric_limits<double>::infinity();
  for (double r : rs) {
    if (r > 0.0) smallest = std::min(smallest, r);
  }
  auto probe = [&](double r) {
    const double g = std::abs(eval_g(p, r).g);
    if (g > 0.0 && (flat.ok || g > flat.worst_violation)) {
      flat.ok = false;
      flat.worst_violation = std::max(flat.worst_violation, g);
      flat.location = r;
    }
  };
  if (std::isfinite(smallest)) probe(smallest);
  if (p.g().kind == GKind::Bump) {
    for (double r : rs) {
      if (r <= p.g().epsilon) probe(r);
    }
    probe(p.g().epsilon);
  }
  checks.push_back(flat);
  checks.push_back(check_growth_ratio(p, rs));
  return finish(std::move(checks));
}

ValidationReport validate_supercritical(const SpeedProfile& p, std::span<const double> rs, double r_flat) {
  if (p.regime() != Regime::Supercritical) {
    throw std::invalid_argument("validate_supercritical needs beta > 1 + k*alpha");
  }
  std::vector<ConditionCheck> checks;
  checks.push_back(check_nonnegative(p, rs));
  checks.push_back(check_vanishes_at_zero(p));
  checks.push_back(check_growth_ratio(p, rs));

  // Ratio test: K = max g / r^m on [r_flat/10, r_flat], then g <= K r^m must
  // keep holding on [r_flat/100, r_flat/10]. A g that is not flat enough has
  // g / r^m growing towards 0 and fails.
  const double m = p.beta_floor() + 1.0;
  constexpr int kPerDecade = 50;
  auto ratio_at = [&](double r) { return eval_g(p, r).g / std::pow(r, m); };
  auto decade_point = [&](double hi, int i) { return hi * std::pow(10.0, -static_cast<double>(i) / kPerDecade); };
  double k_fit = 0.0;
  for (int i = 0; i <= kPerDecade; ++i) k_fit = std::max(k_fit, ratio_at(decade_point(r_flat, i)));
  ConditionCheck flat{Condition::FlatAtZero, true, -std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i <= kPerDecade; ++i) {
    const double r = decade_point(r_flat / 10.0, i);
    const double q = ratio_at(r);
    const double viol = k_fit > 0.0 ? q / k_fit - 1.0 : (q > 0.0 ? std::numeric_limits<double>::infinity() : -1.0);
    if (viol > flat.worst_violation) {
      flat.worst_violation = viol;
      flat.location = r;
    }
  }
  flat.ok = flat.worst_violation <= kValidationTol;
  checks.push_back(flat);
  return finish(std::move(checks));
}

ValidationReport validate_profile(const SpeedProfile& p, std::span<const double> rs) {
  return p.regime() == Regime::Critical ? validate_critical(p, rs) : validate_supercritical(p, rs);
}

}  // namespace anisoflow
