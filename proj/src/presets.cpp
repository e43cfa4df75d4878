#include "fvnsf/presets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fvnsf {

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"constant", "smooth-wave", "thermal-spot"};
  return names;
}

InitialData make_preset(const std::string& name, int dim, const PresetAmplitudes& amp) {
  constexpr double tp = 2.0 * std::numbers::pi;
  if (dim != 2 && dim != 3) throw std::invalid_argument("dimension must be 2 or 3");
  if (!(std::abs(amp.a) < 1.0)) throw std::invalid_argument("amplitude a must satisfy |a| < 1");
  if (!(std::abs(amp.c) < 1.0)) throw std::invalid_argument("amplitude c must satisfy |c| < 1");

  InitialData ic;
  auto zero = [](const Point&) { return 0.0; };
  if (name == "constant") {
    ic.rho = [](const Point&) { return 1.0; };
    ic.u.assign(dim, zero);
    ic.theta = [](const Point&) { return 1.0; };
  } else if (name == "smooth-wave") {
    const double a = amp.a, b = amp.b, c = amp.c;
    ic.rho = [a](const Point& x) { return 1.0 + a * std::sin(tp * x[0]); };
    ic.u.assign(dim, zero);
    ic.u[0] = [b](const Point& x) { return b * std::sin(tp * x[1]); };
    ic.u[1] = [b](const Point& x) { return b * std::sin(tp * x[0]); };
    ic.theta = [c](const Point& x) { return 1.0 + c * std::cos(tp * x[0]); };
  } else if (name == "thermal-spot") {
    const double c = amp.c;
    ic.rho = [](const Point&) { return 1.0; };
    ic.u.assign(dim, zero);
    ic.theta = [c, dim](const Point& x) {
      double p = 1.0;
      for (int i = 0; i < dim; ++i) {
        const double v = std::cos(std::numbers::pi * x[i]);
        p *= v * v;
      }
      return 1.0 + c * p;
    };
  } else {
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected constant, smooth-wave or thermal-spot)");
  }
  return ic;
}

}  // namespace fvnsf
