#pragma once

#include <string>

#include "anisoflow/diagnostics.hpp"

namespace anisoflow::cli {

/// Oscillation and max |grad phi| against tau on a log-scale y axis, as a
/// standalone SVG document. Depends only on the series values.
std::string render_svg(const DiagnosticsSeries& series);

}  // namespace anisoflow::cli
