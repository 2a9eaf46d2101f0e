#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cli/verify.hpp"

namespace anisoflow::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitRuntime = 2,
  kExitVerify = 3,
};

struct RunOptions {
  std::filesystem::path resume;  ///< checkpoint to continue from; empty for a fresh start
};

int cmd_run(const std::filesystem::path& config, const RunOptions& options, std::ostream& out, std::ostream& err);

/// target: "all", a suite name, or a config path (admissibility report of its profile).
int cmd_verify(const std::string& target, std::ostream& out, std::ostream& err, const VerifyHooks& hooks = {});

int cmd_ode_compare(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace anisoflow::cli
