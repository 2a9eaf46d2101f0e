#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "anisoflow/grid.hpp"
#include "anisoflow/speed_profile.hpp"
#include "anisoflow/weingarten.hpp"

namespace anisoflow {

struct DiagnosticsRecord {
  double tau = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double osc = 0.0;           ///< r_max - r_min
  double grad_phi_max = 0.0;  ///< max |grad phi|
  double grad_r_max = 0.0;    ///< max |grad r| = max r |grad phi|
  double u_min = 0.0;         ///< min support function r / rho
  double phi_min_cap = 0.0;   ///< min of lambda^beta f(r / lambda) sigma_k^alpha
  double phi_max_cap = 0.0;
  double cone_margin = 0.0;   ///< min over nodes of min_{j<=k} sigma_j
  double a_max = 0.0;         ///< largest |principal curvature|
  double dt = 0.0;

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

using RecordField = double DiagnosticsRecord::*;

class DiagnosticsSeries {
 public:
  /// Column order of the CSV form.
  static constexpr const char* kHeader =
      "tau,r_min,r_max,osc,grad_phi_max,grad_r_max,u_min,phi_min_cap,phi_max_cap,cone_margin,a_max,dt";

  /// Appends; tau must increase strictly.
  void push(const DiagnosticsRecord& rec);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const DiagnosticsRecord& operator[](std::size_t i) const { return records_[i]; }
  const DiagnosticsRecord& back() const { return records_.back(); }
  const std::vector<DiagnosticsRecord>& records() const noexcept { return records_; }

  std::vector<double> column(RecordField field) const;

  friend bool operator==(const DiagnosticsSeries&, const DiagnosticsSeries&) = default;

 private:
  std::vector<DiagnosticsRecord> records_;
};

/// sigma^alpha, with alpha == 1 passed through unchanged (also for sigma <= 0).
double sigma_power(double sigma, double alpha);

/// Diagnostics of one time slice. Reductions run in node order.
DiagnosticsRecord measure(const SpeedProfile& profile, const WeingartenField& field, double tau,
                          double lambda, double dt);

void write_csv(std::ostream& out, const DiagnosticsSeries& series);
DiagnosticsSeries read_csv(std::istream& in);

struct FitWindow {
  double start = 0.0;
  double end = 0.0;
};

struct DecayFit {
  double rate = 0.0;       ///< slope of log(value) against tau
  double amplitude = 0.0;  ///< exp(intercept)
  double residual = 0.0;   ///< RMS of log residuals
  FitWindow window;
};

/// Least-squares line through (tau, log value) for points inside window.
/// Throws std::invalid_argument with fewer than 10 points or a value <= 0.
DecayFit fit_exponential(std::span<const double> tau, std::span<const double> value, FitWindow window);

/// Fit over the last `tail_fraction` of the recorded tau range.
DecayFit fit_tail(const DiagnosticsSeries& series, RecordField field, double tail_fraction = 0.5);

/// Largest increase of `field` between consecutive records (negative when
/// strictly decreasing throughout).
double max_increase(const DiagnosticsSeries& series, RecordField field);

/// Tail monitor for quantities with non-explicit bounds: compares the last
/// half of the records with the third quarter.
struct TailWindow {
  double third_quarter_min = 0.0;
  double third_quarter_max = 0.0;
  double last_half_min = 0.0;
  double last_half_max = 0.0;

  bool bounded_below(double factor = 0.9) const noexcept { return last_half_min >= factor * third_quarter_min; }
  bool bounded_above(double factor = 1.1) const noexcept { return last_half_max <= factor * third_quarter_max; }
};

TailWindow tail_window(const DiagnosticsSeries& series, RecordField min_field, RecordField max_field);

}  // namespace anisoflow
