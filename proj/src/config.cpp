#include "fvnsf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace fvnsf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& field) {
  auto one = [&](const std::string& t) {
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || t.empty()) {
      throw ConfigError(field + ": not a number: '" + text + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(trim(text));
  const double den = one(trim(text.substr(slash + 1)));
  if (den == 0.0) throw ConfigError(field + ": division by zero in '" + text + "'");
  return one(trim(text.substr(0, slash))) / den;
}

long long parse_integer(const std::string& text, const std::string& field) {
  long long v = 0;
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(field + ": not an integer: '" + text + "'");
  }
  return v;
}

std::vector<int> parse_list(const std::string& text, const std::string& field) {
  std::vector<int> out;
  std::string item;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      out.push_back(static_cast<int>(parse_integer(item, field)));
      item.clear();
    } else {
      item += text[i];
    }
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& value, const std::string& field)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"grid.dim", [](RunConfig& c, auto& v, auto& f) { c.dim = static_cast<int>(parse_integer(v, f)); }},
      {"grid.n", [](RunConfig& c, auto& v, auto& f) { c.n = static_cast<int>(parse_integer(v, f)); }},
      {"time.dt", [](RunConfig& c, auto& v, auto& f) { c.dt = parse_number(v, f); }},
      {"time.dt_factor", [](RunConfig& c, auto& v, auto& f) { c.dt_factor = parse_number(v, f); }},
      {"time.t_end", [](RunConfig& c, auto& v, auto& f) { c.t_end = parse_number(v, f); }},
      {"physics.gamma", [](RunConfig& c, auto& v, auto& f) { c.params.gas.gamma = parse_number(v, f); }},
      {"physics.mu", [](RunConfig& c, auto& v, auto& f) { c.params.mu = parse_number(v, f); }},
      {"physics.lambda", [](RunConfig& c, auto& v, auto& f) { c.params.lambda = parse_number(v, f); }},
      {"physics.kappa", [](RunConfig& c, auto& v, auto& f) { c.params.kappa = parse_number(v, f); }},
      {"scheme.eps", [](RunConfig& c, auto& v, auto& f) { c.params.eps = parse_number(v, f); }},
      {"scheme.alpha",
       [](RunConfig& c, auto& v, auto& f) {
         if (trim(v) == "none" || trim(v) == "off") {
           c.params.alpha.reset();
         } else {
           c.params.alpha = parse_number(v, f);
         }
       }},
      {"scheme.picard_tol", [](RunConfig& c, auto& v, auto& f) { c.params.picard_tol = parse_number(v, f); }},
      {"scheme.picard_max", [](RunConfig& c, auto& v, auto& f) { c.params.picard_max = static_cast<int>(parse_integer(v, f)); }},
      {"scheme.linear_tol", [](RunConfig& c, auto& v, auto& f) { c.params.linear_tol = parse_number(v, f); }},
      {"scheme.linear_max", [](RunConfig& c, auto& v, auto& f) { c.params.linear_max = static_cast<int>(parse_integer(v, f)); }},
      {"ic.preset", [](RunConfig& c, auto& v, auto&) { c.preset = trim(v); }},
      {"ic.a", [](RunConfig& c, auto& v, auto& f) { c.amplitudes.a = parse_number(v, f); }},
      {"ic.b", [](RunConfig& c, auto& v, auto& f) { c.amplitudes.b = parse_number(v, f); }},
      {"ic.c", [](RunConfig& c, auto& v, auto& f) { c.amplitudes.c = parse_number(v, f); }},
      {"output.dir", [](RunConfig& c, auto& v, auto&) { c.out_dir = trim(v); }},
      {"output.record_every", [](RunConfig& c, auto& v, auto& f) { c.record_every = static_cast<int>(parse_integer(v, f)); }},
      {"study.levels", [](RunConfig& c, auto& v, auto& f) { c.study_levels = parse_list(v, f); }},
      {"study.reference", [](RunConfig& c, auto& v, auto& f) { c.study_reference = static_cast<int>(parse_integer(v, f)); }},
      {"consistency.levels", [](RunConfig& c, auto& v, auto& f) { c.consistency_levels = parse_list(v, f); }},
      {"consistency.tau", [](RunConfig& c, auto& v, auto& f) { c.consistency_tau = parse_number(v, f); }},
      {"consistency.dt", [](RunConfig& c, auto& v, auto&) { c.consistency_dt = trim(v); }},
      {"check.seed", [](RunConfig& c, auto& v, auto& f) { c.seed = static_cast<std::uint64_t>(parse_integer(v, f)); }},
      {"check.trials", [](RunConfig& c, auto& v, auto& f) { c.trials = static_cast<int>(parse_integer(v, f)); }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("grid.dim must be 2 or 3");
  if (n < 2) throw ConfigError("grid.n must be >= 2");
  if (dt && !(*dt > 0.0)) throw ConfigError("time.dt must be > 0");
  if (!(dt_factor > 0.0)) throw ConfigError("time.dt_factor must be > 0");
  if (!(t_end >= 0.0)) throw ConfigError("time.t_end must be >= 0");
  if (!(params.gas.gamma > 1.0)) throw ConfigError("physics.gamma must be > 1");
  if (!(params.mu > 0.0)) throw ConfigError("physics.mu must be > 0");
  if (!(params.lambda >= 0.0)) throw ConfigError("physics.lambda must be >= 0");
  if (!(params.kappa > 0.0)) throw ConfigError("physics.kappa must be > 0");
  if (!(params.eps > -1.0 && params.eps < 1.0)) throw ConfigError("scheme.eps must lie in (-1, 1)");
  if (params.alpha && !(*params.alpha > 0.0)) throw ConfigError("scheme.alpha must be > 0");
  if (!(params.picard_tol > 0.0)) throw ConfigError("scheme.picard_tol must be > 0");
  if (params.picard_max < 1) throw ConfigError("scheme.picard_max must be >= 1");
  if (!(params.linear_tol > 0.0)) throw ConfigError("scheme.linear_tol must be > 0");
  if (params.linear_max < 1) throw ConfigError("scheme.linear_max must be >= 1");
  const auto& names = preset_names();
  if (std::find(names.begin(), names.end(), preset) == names.end()) {
    throw ConfigError("ic.preset must be one of constant, smooth-wave, thermal-spot");
  }
  if (!(std::abs(amplitudes.a) < 1.0)) throw ConfigError("ic.a must satisfy |a| < 1");
  if (!(std::abs(amplitudes.c) < 1.0)) throw ConfigError("ic.c must satisfy |c| < 1");
  if (record_every < 1) throw ConfigError("output.record_every must be >= 1");
  const double ratio = t_end / resolved_dt();
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("time.t_end must be an integer multiple of time.dt");
  }
  if (study_levels.empty()) throw ConfigError("study.levels must not be empty");
  for (std::size_t i = 0; i < study_levels.size(); ++i) {
    if (study_levels[i] < 2) throw ConfigError("study.levels entries must be >= 2");
    if (i > 0 && study_levels[i] != 2 * study_levels[i - 1]) {
      throw ConfigError("study.levels must be a doubling chain");
    }
    if (study_reference <= study_levels[i] || study_reference % study_levels[i] != 0) {
      throw ConfigError("study.reference must be a strict multiple of every study level");
    }
  }
  if (consistency_levels.empty()) throw ConfigError("consistency.levels must not be empty");
  for (int l : consistency_levels) {
    if (l < 2) throw ConfigError("consistency.levels entries must be >= 2");
  }
  if (!(consistency_tau > 0.0)) throw ConfigError("consistency.tau must be > 0");
  if (consistency_dt != "h2" && consistency_dt != "h") {
    throw ConfigError("consistency.dt must be 'h2' or 'h'");
  }
  if (trials < 1) throw ConfigError("check.trials must be >= 1");
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"grid", "time", "physics", "scheme", "ic",
                                    "output", "study", "consistency", "check"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
        throw ConfigError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    const std::string field = section + "." + trim(line.substr(0, eq));
    const auto it = setters().find(field);
    if (it == setters().end()) throw ConfigError(where + "unknown key " + field);
    try {
      it->second(cfg, trim(line.substr(eq + 1)), field);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in, path);
}

}  // namespace fvnsf
