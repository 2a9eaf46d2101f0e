#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "anisoflow/errors.hpp"
#include "anisoflow/flow_engine.hpp"
#include "anisoflow/sphere_ode.hpp"
#include "cli/config.hpp"
#include "cli/initial_data.hpp"
#include "cli/svg_plot.hpp"

namespace anisoflow::cli {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

// Opens every configured output for writing; returns the first failure.
std::string check_writable(const OutputSpec& out) {
  for (const std::string* p : {&out.csv_path, &out.plot_path, &out.checkpoint_path}) {
    if (p->empty()) continue;
    std::ofstream f(*p, std::ios::app);
    if (!f) return *p;
  }
  return {};
}

std::string decay_rate(const DiagnosticsSeries& series) {
  try {
    return sci(fit_tail(series, &DiagnosticsRecord::osc).rate);
  } catch (const std::invalid_argument&) {
    return "n/a";
  }
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error:\n" << e.what() << '\n';
    return kExitConfig;
  }
  if (const std::string bad = check_writable(cfg.output); !bad.empty()) {
    err << "config error: cannot write '" << bad << "'\n";
    return kExitConfig;
  }

  FlowState initial = FlowState::initial(cfg.profile, make_initial_graph(cfg.grid, cfg.initial, config_path.parent_path()));
  if (!options.resume.empty()) {
    std::ifstream in(options.resume);
    if (!in) {
      err << "config error: cannot open checkpoint '" << options.resume.string() << "'\n";
      return kExitConfig;
    }
    try {
      initial = read_checkpoint(in);
    } catch (const Error& e) {
      err << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
    if (!(initial.profile == cfg.profile) || !(initial.graph.grid() == cfg.grid)) {
      err << "config error: checkpoint profile or grid differs from the config\n";
      return kExitConfig;
    }
  }

  std::optional<RunResult> outcome;
  try {
    outcome = run(initial, cfg.control);
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const RunResult& result = *outcome;
  if (!cfg.output.csv_path.empty()) {
    std::ofstream f(cfg.output.csv_path, std::ios::trunc);
    write_csv(f, result.series);
  }
  if (!cfg.output.plot_path.empty()) {
    std::ofstream f(cfg.output.plot_path, std::ios::trunc);
    f << render_svg(result.series);
  }
  if (!cfg.output.checkpoint_path.empty()) {
    std::ofstream f(cfg.output.checkpoint_path, std::ios::trunc);
    write_checkpoint(f, result.final_state);
  }
  const FlowState& s = result.final_state;
  out << "stop=" << to_string(result.reason) << " steps=" << s.step_count << " tau=" << sci(s.tau)
      << " oscillation=" << sci(oscillation(s.graph)) << " decay_rate=" << decay_rate(result.series) << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& target, std::ostream& out, std::ostream& err, const VerifyHooks& hooks) {
  std::vector<SuiteResult> results;
  if (target == "all") {
    for (const std::string& name : kSuiteNames) results.push_back(verify_suite(name, hooks));
  } else if (std::find(kSuiteNames.begin(), kSuiteNames.end(), target) != kSuiteNames.end()) {
    results.push_back(verify_suite(target, hooks));
  } else if (std::filesystem::exists(target)) {
    RunConfig cfg;
    try {
      // Admissibility is the subject of the report, so it must not abort parsing.
      cfg = load_config(target, ParseOptions{false});
    } catch (const ConfigError& e) {
      err << "config error:\n" << e.what() << '\n';
      return kExitConfig;
    }
    results.push_back(verify_profile_report(cfg.profile));
  } else {
    err << "unknown suite or missing config '" << target << "'\n";
    return kExitConfig;
  }
  bool ok = true;
  for (const SuiteResult& r : results) {
    print_suite(out, r);
    ok = ok && r.ok();
  }
  return ok ? kExitOk : kExitVerify;
}

int cmd_ode_compare(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error:\n" << e.what() << '\n';
    return kExitConfig;
  }
  if (cfg.initial.kind != InitialKind::Sphere) {
    err << "config error: ode-compare needs [initial] kind = sphere\n";
    return kExitConfig;
  }
  PdeOdeComparison cmp;
  try {
    cmp = pde_vs_ode_check(cfg.profile, cfg.initial.r0, cfg.control.t_end, cfg.grid, cfg.control);
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  const SphereTrajectoryPoint& last = cmp.trajectory.back();
  out << "tau=" << sci(last.tau) << " r_grid=" << sci(last.r_pde) << " r_ode=" << sci(last.r_ode) << '\n';
  if (cfg.profile.regime() == Regime::Supercritical && cfg.profile.g().kind == GKind::Zero) {
    const double r2 = closed_form_r2(cfg.profile, cfg.initial.r0, last.tau);
    out << "closed_form=" << sci(r2) << " relative_gap=" << sci(std::abs(last.r_pde - r2) / r2) << '\n';
  }
  const bool ok = cmp.max_relative_deviation <= 1e-4 && cmp.max_non_uniformity <= 1e-8;
  out << "max_relative_deviation=" << sci(cmp.max_relative_deviation)
      << " max_non_uniformity=" << sci(cmp.max_non_uniformity) << (ok ? " PASS" : " FAIL") << '\n';
  return ok ? kExitOk : kExitVerify;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalized anisotropic curvature flow of radial graphs"};
  app.require_subcommand(1);

  std::string run_config, resume;
  auto* run_cmd = app.add_subcommand("run", "Integrate the flow described by a config file");
  run_cmd->add_option("config", run_config, "Run configuration")->required();
  run_cmd->add_option("--resume", resume, "Checkpoint to continue from");

  std::string verify_target = "all";
  auto* verify_cmd = app.add_subcommand("verify", "Run property suites (all, symfunc, oracle, sphere-ode, profiles) "
                                                  "or report the admissibility of a config's profile");
  verify_cmd->add_option("suite", verify_target, "Suite name or config path");

  std::string ode_config;
  auto* ode_cmd = app.add_subcommand("ode-compare", "Compare a sphere run against the sphere equation");
  ode_cmd->add_option("config", ode_config, "Run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitConfig;
  }
  try {
    if (*run_cmd) return cmd_run(run_config, {resume}, out, err);
    if (*verify_cmd) return cmd_verify(verify_target, out, err);
    return cmd_ode_compare(ode_config, out, err);
  } catch (const ConfigError& e) {
    err << "config error:\n" << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace anisoflow::cli
