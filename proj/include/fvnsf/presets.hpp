#pragma once

#include <string>
#include <vector>

#include "fvnsf/convergence.hpp"

namespace fvnsf {

/// Amplitudes of the built-in initial data. smooth-wave uses a, b, c;
/// thermal-spot uses c only.
struct PresetAmplitudes {
  double a = 0.2;
  double b = 0.1;
  double c = 0.1;
};

/// Closed-form periodic samplers for "constant", "smooth-wave" or
/// "thermal-spot"; throws std::invalid_argument for unknown names or
/// amplitudes that would break positivity (|a| >= 1, |c| >= 1).
InitialData make_preset(const std::string& name, int dim, const PresetAmplitudes& amp = {});

const std::vector<std::string>& preset_names();

}  // namespace fvnsf
