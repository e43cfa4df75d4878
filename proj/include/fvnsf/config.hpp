#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvnsf/presets.hpp"
#include "fvnsf/scheme.hpp"

namespace fvnsf {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  // [grid]
  int dim = 2;
  int n = 32;
  // [time]; dt defaults to dt_factor * h when not given
  std::optional<double> dt;
  double dt_factor = 0.5;
  double t_end = 0.125;
  // [physics] / [scheme]
  SchemeParams params;
  // [ic]
  std::string preset = "smooth-wave";
  PresetAmplitudes amplitudes;
  // [output]
  std::string out_dir = ".";
  int record_every = 1;
  // [study]
  std::vector<int> study_levels{16, 32, 64};
  int study_reference = 256;
  // [consistency]
  std::vector<int> consistency_levels{8, 16, 32, 64};
  double consistency_tau = 0.03125;
  std::string consistency_dt = "h2";  // "h2" (dt = h^2) or "h" (dt = dt_factor h)
  // [check]
  std::uint64_t seed = 20240611;
  int trials = 100;

  double resolved_dt() const { return dt ? *dt : dt_factor / n; }
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Sectioned key = value text; '#' or ';' start comments. Numbers accept the
/// rational form p/q. Unknown sections or keys are errors.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace fvnsf
