#include "cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace anisoflow::cli {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string render_svg(const DiagnosticsSeries& series) {
  struct Curve {
    RecordField field;
    const char* label;
    const char* colour;
  };
  const Curve curves[] = {{&DiagnosticsRecord::osc, "oscillation", "#1f77b4"},
                          {&DiagnosticsRecord::grad_phi_max, "max |grad phi|", "#d62728"}};

  double t0 = 0.0, t1 = 1.0;
  if (!series.empty()) {
    t0 = series[0].tau;
    t1 = std::max(series.back().tau, t0 + 1e-12);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Curve& c : curves) {
    for (const auto& r : series.records()) {
      const double v = r.*c.field;
      if (v > 0.0 && std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!(lo < hi)) {
    lo = std::isfinite(lo) ? lo / 10.0 : 1e-3;
    hi = lo * 100.0;
  }
  const double d0 = std::floor(std::log10(lo));
  const double d1 = std::max(std::ceil(std::log10(hi)), d0 + 1.0);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto x_of = [&](double t) { return kLeft + pw * (t - t0) / (t1 - t0); };
  auto y_of = [&](double v) { return kTop + ph * (d1 - std::log10(v)) / (d1 - d0); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = d0; d <= d1; d += 1.0) {
    const double y = y_of(std::pow(10.0, d));
    os << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << fmt("%.0f", d)
       << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double t = t0 + (t1 - t0) * i / 5.0;
    const double x = x_of(t);
    os << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt("%.3g", t)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">tau</text>\n";

  int legend = 0;
  for (const Curve& c : curves) {
    os << "<polyline fill=\"none\" stroke=\"" << c.colour << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : series.records()) {
      const double v = r.*c.field;
      if (!(v > 0.0) || !std::isfinite(v)) continue;
      os << fmt("%.2f", x_of(r.tau)) << ',' << fmt("%.2f", y_of(v)) << ' ';
    }
    os << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * legend++;
    os << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 30 << "\" y2=\"" << ly
       << "\" stroke=\"" << c.colour << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + pw + 35 << "\" y=\"" << ly + 4 << "\">" << c.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace anisoflow::cli
