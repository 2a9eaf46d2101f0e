#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "anisoflow/speed_profile.hpp"
#include "anisoflow/symfunc.hpp"

namespace anisoflow::cli {

/// Replaceable pieces of the library under test, so that a deliberately
/// broken implementation can be fed through the suites.
struct VerifyHooks {
  std::function<CurvatureVector(const CurvatureVector&, int)> partials = sigma_k_partials;
};

struct CheckLine {
  std::string name;
  bool ok = true;
  double worst = 0.0;  ///< worst observed residual or margin, meaning given by detail
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckLine> checks;

  bool ok() const noexcept;
};

inline const std::vector<std::string> kSuiteNames = {"symfunc", "oracle", "sphere-ode", "profiles"};

SuiteResult verify_symfunc(const VerifyHooks& hooks = {}, int samples_per_case = 10000);
SuiteResult verify_oracle();
SuiteResult verify_sphere_ode();
SuiteResult verify_profiles();
SuiteResult verify_suite(const std::string& name, const VerifyHooks& hooks = {});

/// Admissibility report of a single profile as a suite.
SuiteResult verify_profile_report(const SpeedProfile& profile);

void print_suite(std::ostream& out, const SuiteResult& suite);

}  // namespace anisoflow::cli
