#pragma once

// Run configuration: an INI-like text with sections [profile], [grid],
// [initial], [control], [output], `key = value` lines and `#` comments.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisoflow/flow_engine.hpp"
#include "anisoflow/grid.hpp"
#include "anisoflow/speed_profile.hpp"

namespace anisoflow::cli {

/// Every problem found while parsing; what() joins them one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class InitialKind { Sphere, Fourier, File };
enum class FourierTarget { R, Phi };

/// One basis function with its coefficient. For n = 1: "const", "cos<m>",
/// "sin<m>". For n = 2: "const" or "Y<l>_<m>" = P_l^{|m|}(cos theta) times
/// cos(m lon) (m > 0), 1 (m = 0) or sin(|m| lon) (m < 0); P_l^m is the
/// associated Legendre function without the Condon-Shortley phase.
struct FourierTerm {
  std::string name;
  double coefficient = 0.0;

  friend bool operator==(const FourierTerm&, const FourierTerm&) = default;
};

struct InitialData {
  InitialKind kind = InitialKind::Sphere;
  double r0 = 1.0;
  FourierTarget target = FourierTarget::R;
  std::vector<FourierTerm> terms;
  std::string path;

  friend bool operator==(const InitialData&, const InitialData&) = default;
};

struct OutputSpec {
  std::string csv_path;
  std::string plot_path;
  std::string checkpoint_path;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
  SpeedProfile profile;
  std::string table_path;  ///< g.table_path as written
  SphericalGrid grid = SphericalGrid::circle(SphericalGrid::kMinNodes);
  InitialData initial;
  StepControl control;
  OutputSpec output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ParseOptions {
  /// Reject profiles whose g is not admissible for the regime (unless the
  /// config sets skip_validation).
  bool check_admissibility = true;
};

/// Relative paths (table, initial file) resolve against base_dir.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {},
                       ParseOptions options = {});
RunConfig load_config(const std::filesystem::path& path, ParseOptions options = {});

/// Canonical text form; parse_config(print_config(c)) == c.
std::string print_config(const RunConfig& config);

}  // namespace anisoflow::cli
