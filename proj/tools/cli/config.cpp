#include "cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cli/initial_data.hpp"

namespace anisoflow::cli {

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string s;
        for (std::size_t i = 0; i < problems.size(); ++i) s += (i ? "\n" : "") + problems[i];
        return s;
      }()),
      problems_(std::move(problems)) {}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"profile", {"n", "k", "alpha", "beta", "g.kind", "g.epsilon", "g.p", "g.l", "g.table_path"}},
    {"grid", {"n", "N", "N_lat", "N_lon"}},
    {"initial", {"kind", "r0", "on", "coefficients", "path"}},
    {"control",
     {"cfl", "dt_max", "t_end", "sphericity_stop", "max_steps", "record_every", "cone_eps", "cone_policy",
      "polar_cap", "skip_validation"}},
    {"output", {"csv_path", "plot_path", "checkpoint_path"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Typed access to one section with problem collection.
class Reader {
 public:
  Reader(std::string name, Section& sec, std::vector<std::string>& problems)
      : name_(std::move(name)), sec_(sec), problems_(problems) {}

  bool has(const std::string& key) const { return sec_.count(key) != 0; }

  const Entry* get(const std::string& key) {
    auto it = sec_.find(key);
    if (it == sec_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  void problem(const std::string& key, const std::string& msg) {
    problems_.push_back("[" + name_ + "] " + key + ": " + msg);
  }

  std::string text(const std::string& key, const std::string& fallback = {}) {
    const Entry* e = get(key);
    return e ? e->value : fallback;
  }

  double real(const std::string& key, double fallback) {
    const Entry* e = get(key);
    if (!e) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(e->value, &pos);
      if (pos == e->value.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    problem(key, "expected a finite number, got '" + e->value + "' (line " + std::to_string(e->line) + ")");
    return fallback;
  }

  long long integer(const std::string& key, long long fallback) {
    const Entry* e = get(key);
    if (!e) return fallback;
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(e->value, &pos);
      if (pos == e->value.size()) return v;
    } catch (const std::exception&) {
    }
    problem(key, "expected an integer, got '" + e->value + "' (line " + std::to_string(e->line) + ")");
    return fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    const Entry* e = get(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    problem(key, "expected true or false, got '" + e->value + "' (line " + std::to_string(e->line) + ")");
    return fallback;
  }

  void require(const std::string& key) {
    if (!has(key)) problem(key, "required key missing");
  }

  void forbid(const std::string& key, const std::string& why) {
    if (const Entry* e = get(key)) problem(key, why + " (line " + std::to_string(e->line) + ")");
  }

 private:
  std::string name_;
  Section& sec_;
  std::vector<std::string>& problems_;
};

std::vector<FourierTerm> parse_terms(const std::string& text, Reader& rd) {
  std::vector<FourierTerm> terms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      rd.problem("coefficients", "expected name:value, got '" + item + "'");
      continue;
    }
    FourierTerm t;
    t.name = trim(item.substr(0, colon));
    const std::string v = trim(item.substr(colon + 1));
    try {
      std::size_t pos = 0;
      t.coefficient = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      rd.problem("coefficients", "bad coefficient '" + v + "' for " + t.name);
      continue;
    }
    terms.push_back(t);
  }
  if (terms.empty()) rd.problem("coefficients", "no terms given");
  return terms;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, ParseOptions options) {
  std::vector<std::string> problems;
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back(where + ": syntax error: unterminated section header");
        continue;
      }
      current = trim(line.substr(1, line.size() - 2));
      if (!kKnownKeys.count(current)) {
        problems.push_back(where + ": unknown section [" + current + "]");
      } else if (sections.count(current)) {
        problems.push_back(where + ": duplicate section [" + current + "]");
      }
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + ": syntax error: expected 'key = value'");
      continue;
    }
    if (current.empty()) {
      problems.push_back(where + ": syntax error: key outside of any section");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      problems.push_back(where + ": syntax error: empty key");
      continue;
    }
    if (!kKnownKeys.count(current)) continue;
    if (!kKnownKeys.at(current).count(key)) {
      problems.push_back(where + ": unknown key '" + key + "' in [" + current + "]");
      continue;
    }
    Section& sec = sections[current];
    if (sec.count(key)) {
      problems.push_back(where + ": duplicate key '" + key + "' in [" + current + "]");
      continue;
    }
    sec[key] = Entry{value, line_no, false};
  }
  if (!problems.empty()) throw ConfigError(problems);

  RunConfig cfg;

  // [profile]
  Reader prof("profile", sections["profile"], problems);
  for (const char* key : {"n", "k", "alpha", "beta"}) prof.require(key);
  const int n = static_cast<int>(prof.integer("n", 1));
  const int k = static_cast<int>(prof.integer("k", 1));
  const double alpha = prof.real("alpha", 1.0);
  const double beta = prof.real("beta", 2.0);
  GSpec g;
  bool profile_ok = true;
  try {
    g.kind = parse_gkind(prof.text("g.kind", "zero"));
  } catch (const std::invalid_argument& e) {
    prof.problem("g.kind", e.what());
    profile_ok = false;
  }
  const bool wants_eps = g.kind == GKind::Bump;
  const bool wants_p = g.kind == GKind::Bump || g.kind == GKind::ExpFlat;
  const bool wants_l = g.kind == GKind::Monomial;
  const bool wants_table = g.kind == GKind::Tabulated;
  const std::string kind_name = to_string(g.kind);
  auto gate = [&](bool wanted, const char* key) {
    if (wanted) {
      prof.require(key);
    } else {
      prof.forbid(key, std::string("does not apply to g.kind = ") + kind_name);
    }
  };
  gate(wants_eps, "g.epsilon");
  gate(wants_p, "g.p");
  gate(wants_l, "g.l");
  gate(wants_table, "g.table_path");
  if (wants_eps) g.epsilon = prof.real("g.epsilon", 0.0);
  if (wants_p) g.p = prof.real("g.p", 1.0);
  if (wants_l) g.l = prof.real("g.l", 0.0);
  if (wants_table) {
    cfg.table_path = prof.text("g.table_path");
    std::filesystem::path p(cfg.table_path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    try {
      g.table = std::make_shared<const GTable>(GTable::load(p.string()));
    } catch (const std::exception& e) {
      prof.problem("g.table_path", e.what());
      profile_ok = false;
    }
  }
  if (profile_ok) {
    try {
      cfg.profile = SpeedProfile::make(n, k, alpha, beta, g);
    } catch (const std::exception& e) {
      prof.problem("alpha/beta/g", e.what());
      profile_ok = false;
    }
  }

  // [grid]
  Reader grid("grid", sections["grid"], problems);
  const long long grid_n = grid.integer("n", n);
  if (grid_n != n) grid.problem("n", "must equal [profile] n = " + std::to_string(n));
  bool grid_ok = true;
  try {
    if (n == 1) {
      grid.require("N");
      grid.forbid("N_lat", "only for n = 2");
      grid.forbid("N_lon", "only for n = 2");
      cfg.grid = SphericalGrid::circle(static_cast<int>(grid.integer("N", SphericalGrid::kMinNodes)));
    } else if (n == 2) {
      grid.require("N_lat");
      grid.require("N_lon");
      grid.forbid("N", "only for n = 1");
      cfg.grid = SphericalGrid::sphere(static_cast<int>(grid.integer("N_lat", SphericalGrid::kMinNodes)),
                                       static_cast<int>(grid.integer("N_lon", SphericalGrid::kMinNodes)));
    } else {
      grid_ok = false;
    }
  } catch (const std::exception& e) {
    grid.problem("N", e.what());
    grid_ok = false;
  }

  // [initial]
  Reader init("initial", sections["initial"], problems);
  const std::string kind = init.text("kind", "sphere");
  InitialData& id = cfg.initial;
  if (kind == "sphere") {
    id.kind = InitialKind::Sphere;
    id.r0 = init.real("r0", 1.0);
    if (!(id.r0 > 0.0)) init.problem("r0", "must be positive");
    for (const char* key : {"on", "coefficients", "path"}) init.forbid(key, "does not apply to kind = sphere");
  } else if (kind == "fourier") {
    id.kind = InitialKind::Fourier;
    const std::string on = init.text("on", "r");
    if (on == "r") {
      id.target = FourierTarget::R;
    } else if (on == "phi") {
      id.target = FourierTarget::Phi;
    } else {
      init.problem("on", "expected r or phi, got '" + on + "'");
    }
    init.require("coefficients");
    id.terms = parse_terms(init.text("coefficients"), init);
    for (const FourierTerm& t : id.terms) {
      try {
        basis_value(n, t.name, 0.5, 0.5);
      } catch (const std::exception& e) {
        init.problem("coefficients", e.what());
      }
    }
    for (const char* key : {"r0", "path"}) init.forbid(key, "does not apply to kind = fourier");
  } else if (kind == "file") {
    id.kind = InitialKind::File;
    init.require("path");
    id.path = init.text("path");
    for (const char* key : {"r0", "on", "coefficients"}) init.forbid(key, "does not apply to kind = file");
  } else {
    init.problem("kind", "expected sphere, fourier or file, got '" + kind + "'");
  }

  // [control]
  Reader ctl("control", sections["control"], problems);
  StepControl& c = cfg.control;
  c.cfl = ctl.real("cfl", c.cfl);
  c.dt_max = ctl.real("dt_max", c.dt_max);
  c.t_end = ctl.real("t_end", c.t_end);
  c.sphericity_stop = ctl.real("sphericity_stop", c.sphericity_stop);
  c.max_steps = ctl.integer("max_steps", c.max_steps);
  c.record_every = ctl.integer("record_every", c.record_every);
  c.cone_eps = ctl.real("cone_eps", c.cone_eps);
  const std::string policy = ctl.text("cone_policy", "abort");
  if (policy == "abort") {
    c.cone_policy = ConePolicy::Abort;
  } else if (policy == "monitor") {
    c.cone_policy = ConePolicy::Monitor;
  } else {
    ctl.problem("cone_policy", "expected abort or monitor, got '" + policy + "'");
  }
  c.polar_cap = ctl.real("polar_cap", c.polar_cap);
  c.skip_validation = ctl.boolean("skip_validation", c.skip_validation);
  if (profile_ok) {
    try {
      c.validate(cfg.profile);
    } catch (const std::invalid_argument& e) {
      problems.push_back(std::string("[control] ") + e.what());
    }
  }

  // [output]
  Reader out("output", sections["output"], problems);
  cfg.output.csv_path = out.text("csv_path");
  cfg.output.plot_path = out.text("plot_path");
  cfg.output.checkpoint_path = out.text("checkpoint_path");

  if (profile_ok && options.check_admissibility && !c.skip_validation) {
    std::vector<double> samples = default_validation_samples();
    if (g.kind == GKind::Tabulated && g.table) {
      std::erase_if(samples, [&](double r) { return r > g.table->r.back(); });
    }
    const ValidationReport rep = validate_profile(cfg.profile, samples);
    if (!rep.ok) {
      problems.push_back(std::string("[profile] g.kind: g = ") + kind_name + " is not admissible for the " +
                         (cfg.profile.regime() == Regime::Critical ? "critical (beta = 1 + k alpha)"
                                                                   : "supercritical (beta > 1 + k alpha)") +
                         " regime: " + rep.summary());
    }
  }

  if (problems.empty() && grid_ok) {
    try {
      make_initial_graph(cfg.grid, cfg.initial, base_dir);
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path.string() + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path(), options);
}

std::string print_config(const RunConfig& cfg) {
  std::ostringstream os;
  const SpeedProfile& p = cfg.profile;
  const GSpec& g = p.g();
  os << "[profile]\n";
  os << "n = " << p.n() << "\nk = " << p.k() << "\nalpha = " << num(p.alpha()) << "\nbeta = " << num(p.beta())
     << "\ng.kind = " << to_string(g.kind) << '\n';
  if (g.kind == GKind::Bump) os << "g.epsilon = " << num(g.epsilon) << '\n';
  if (g.kind == GKind::Bump || g.kind == GKind::ExpFlat) os << "g.p = " << num(g.p) << '\n';
  if (g.kind == GKind::Monomial) os << "g.l = " << num(g.l) << '\n';
  if (g.kind == GKind::Tabulated) os << "g.table_path = " << cfg.table_path << '\n';

  os << "\n[grid]\nn = " << cfg.grid.dim() << '\n';
  if (cfg.grid.dim() == 1) {
    os << "N = " << cfg.grid.n_lon() << '\n';
  } else {
    os << "N_lat = " << cfg.grid.n_lat() << "\nN_lon = " << cfg.grid.n_lon() << '\n';
  }

  os << "\n[initial]\n";
  const InitialData& id = cfg.initial;
  switch (id.kind) {
    case InitialKind::Sphere:
      os << "kind = sphere\nr0 = " << num(id.r0) << '\n';
      break;
    case InitialKind::Fourier: {
      os << "kind = fourier\non = " << (id.target == FourierTarget::R ? "r" : "phi") << "\ncoefficients = ";
      for (std::size_t i = 0; i < id.terms.size(); ++i) {
        os << (i ? ", " : "") << id.terms[i].name << ':' << num(id.terms[i].coefficient);
      }
      os << '\n';
      break;
    }
    case InitialKind::File:
      os << "kind = file\npath = " << id.path << '\n';
      break;
  }

  const StepControl& c = cfg.control;
  os << "\n[control]\ncfl = " << num(c.cfl) << "\ndt_max = " << num(c.dt_max) << "\nt_end = " << num(c.t_end)
     << "\nsphericity_stop = " << num(c.sphericity_stop) << "\nmax_steps = " << c.max_steps
     << "\nrecord_every = " << c.record_every << "\ncone_eps = " << num(c.cone_eps)
     << "\ncone_policy = " << to_string(c.cone_policy) << "\npolar_cap = " << num(c.polar_cap)
     << "\nskip_validation = " << (c.skip_validation ? "true" : "false") << '\n';

  os << "\n[output]\n";
  if (!cfg.output.csv_path.empty()) os << "csv_path = " << cfg.output.csv_path << '\n';
  if (!cfg.output.plot_path.empty()) os << "plot_path = " << cfg.output.plot_path << '\n';
  if (!cfg.output.checkpoint_path.empty()) os << "checkpoint_path = " << cfg.output.checkpoint_path << '\n';
  return os.str();
}

}  // namespace anisoflow::cli
