#include "anisoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "anisoflow/errors.hpp"

namespace anisoflow {

void DiagnosticsSeries::push(const DiagnosticsRecord& rec) {
  if (!records_.empty() && !(rec.tau > records_.back().tau)) {
    throw std::invalid_argument("diagnostics: tau must increase strictly");
  }
  records_.push_back(rec);
}

std::vector<double> DiagnosticsSeries::column(RecordField field) const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.*field);
  return out;
}

double sigma_power(double sigma, double alpha) { return alpha == 1.0 ? sigma : std::pow(sigma, alpha); }

DiagnosticsRecord measure(const SpeedProfile& profile, const WeingartenField& field, double tau,
                          double lambda, double dt) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  DiagnosticsRecord rec;
  rec.tau = tau;
  rec.dt = dt;
  rec.r_min = inf;
  rec.r_max = -inf;
  rec.u_min = inf;
  rec.phi_min_cap = inf;
  rec.phi_max_cap = -inf;
  rec.cone_margin = inf;
  const int k = profile.k();
  for (const NodeGeometry& g : field.nodes) {
    rec.r_min = std::min(rec.r_min, g.r);
    rec.r_max = std::max(rec.r_max, g.r);
    rec.u_min = std::min(rec.u_min, g.u);
    rec.grad_phi_max = std::max(rec.grad_phi_max, g.grad_norm);
    rec.grad_r_max = std::max(rec.grad_r_max, g.r * g.grad_norm);
    double margin = g.sigma[0];
    for (int j = 2; j <= k; ++j) margin = std::min(margin, g.sigma[static_cast<std::size_t>(j - 1)]);
    rec.cone_margin = std::min(rec.cone_margin, margin);
    for (int i = 0; i < g.kappa.dim(); ++i) rec.a_max = std::max(rec.a_max, std::abs(g.kappa[i]));
    const double speed = eval_scaled(profile, lambda, g.r).f *
                         sigma_power(g.sigma[static_cast<std::size_t>(k - 1)], profile.alpha());
    rec.phi_min_cap = std::min(rec.phi_min_cap, speed);
    rec.phi_max_cap = std::max(rec.phi_max_cap, speed);
  }
  rec.osc = rec.r_max - rec.r_min;
  return rec;
}

namespace {

constexpr RecordField kColumns[] = {
    &DiagnosticsRecord::tau,          &DiagnosticsRecord::r_min,       &DiagnosticsRecord::r_max,
    &DiagnosticsRecord::osc,          &DiagnosticsRecord::grad_phi_max, &DiagnosticsRecord::grad_r_max,
    &DiagnosticsRecord::u_min,        &DiagnosticsRecord::phi_min_cap, &DiagnosticsRecord::phi_max_cap,
    &DiagnosticsRecord::cone_margin,  &DiagnosticsRecord::a_max,       &DiagnosticsRecord::dt,
};

}  // namespace

void write_csv(std::ostream& out, const DiagnosticsSeries& series) {
  out << DiagnosticsSeries::kHeader << '\n';
  char buf[32];
  for (const auto& rec : series.records()) {
    bool first = true;
    for (RecordField f : kColumns) {
      if (!first) out << ',';
      first = false;
      std::snprintf(buf, sizeof buf, "%.17g", rec.*f);
      out << buf;
    }
    out << '\n';
  }
}

DiagnosticsSeries read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != DiagnosticsSeries::kHeader) {
    throw FormatError("diagnostics CSV: unexpected header");
  }
  DiagnosticsSeries series;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    DiagnosticsRecord rec;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= std::size(kColumns)) throw FormatError("diagnostics CSV line " + std::to_string(line_no) + ": too many columns");
      try {
        rec.*kColumns[col] = std::stod(cell);
      } catch (const std::exception&) {
        throw FormatError("diagnostics CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      ++col;
    }
    if (col != std::size(kColumns)) throw FormatError("diagnostics CSV line " + std::to_string(line_no) + ": too few columns");
    series.push(rec);
  }
  return series;
}

DecayFit fit_exponential(std::span<const double> tau, std::span<const double> value, FitWindow window) {
  if (tau.size() != value.size()) throw std::invalid_argument("fit_exponential: size mismatch");
  if (!(window.end > window.start)) throw std::invalid_argument("fit_exponential: empty window");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < window.start || tau[i] > window.end) continue;
    if (!(value[i] > 0.0)) {
      throw std::invalid_argument("fit_exponential: nonpositive value at tau = " + std::to_string(tau[i]));
    }
    xs.push_back(tau[i]);
    ys.push_back(std::log(value[i]));
  }
  if (xs.size() < 10) throw std::invalid_argument("fit_exponential: fewer than 10 points in window");
  // Centre the abscissae before solving the normal equations.
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponential: degenerate abscissae");
  DecayFit fit;
  fit.rate = sxy / sxx;
  const double intercept = my - fit.rate * mx;
  fit.amplitude = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + fit.rate * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.window = {xs.front(), xs.back()};
  return fit;
}

DecayFit fit_tail(const DiagnosticsSeries& series, RecordField field, double tail_fraction) {
  if (series.empty()) throw std::invalid_argument("fit_tail: empty series");
  const double t0 = series[0].tau;
  const double t1 = series.back().tau;
  const auto tau = series.column(&DiagnosticsRecord::tau);
  const auto val = series.column(field);
  return fit_exponential(tau, val, {t1 - tail_fraction * (t1 - t0), t1});
}

double max_increase(const DiagnosticsSeries& series, RecordField field) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < series.size(); ++i) worst = std::max(worst, series[i].*field - series[i - 1].*field);
  return worst;
}

TailWindow tail_window(const DiagnosticsSeries& series, RecordField min_field, RecordField max_field) {
  if (series.size() < 4) throw std::invalid_argument("tail_window: need at least 4 records");
  constexpr double inf = std::numeric_limits<double>::infinity();
  TailWindow w{inf, -inf, inf, -inf};
  const double t0 = series[0].tau;
  const double span = series.back().tau - t0;
  for (const auto& r : series.records()) {
    const double x = (r.tau - t0) / span;
    if (x >= 0.5) {
      w.last_half_min = std::min(w.last_half_min, r.*min_field);
      w.last_half_max = std::max(w.last_half_max, r.*max_field);
      if (x <= 0.75) {
        w.third_quarter_min = std::min(w.third_quarter_min, r.*min_field);
        w.third_quarter_max = std::max(w.third_quarter_max, r.*max_field);
      }
    }
  }
  return w;
}

}  // namespace anisoflow
