#pragma once

#include <array>

#include "fvnsf/state.hpp"

namespace fvnsf {

/// Perfect gas p = (gamma - 1) rho e with e = c_v theta, so p = rho theta.
struct GasParams {
  double gamma = 1.4;

  double cv() const noexcept { return 1.0 / (gamma - 1.0); }
  /// Throws std::invalid_argument unless gamma > 1.
  void validate() const;
};

/// rho * theta, clamped to 0 for theta <= 0.
inline double pressure(double rho, double theta) noexcept {
  return theta > 0.0 ? rho * theta : 0.0;
}

/// s = c_v log(theta) - log(rho); std::domain_error off the positive quadrant.
double entropy(double rho, double theta, const GasParams& gas);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Hessian of -rho s with respect to (rho, p).
Matrix2 entropy_hessian(double rho, double theta, const GasParams& gas);

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
std::array<double, 2> symmetric_eigenvalues(const Matrix2& m);

struct HessianBounds {
  double lower;
  double upper;
};

/// Closed-form enclosure of the entropy Hessian spectrum.
HessianBounds hessian_bounds(double rho, double theta, const GasParams& gas);

/// H(rho, theta) = rho (c_v theta - theta_ref s(rho, theta)).
double ballistic_energy(double rho, double theta, double theta_ref, const GasParams& gas);
/// dH/drho = c_v theta - theta_ref (s - 1).
double ballistic_energy_drho(double rho, double theta, double theta_ref, const GasParams& gas);

/// Pointwise E(rho, theta | rho_ref, theta_ref) (without the kinetic part).
double relative_energy_density(double rho, double theta, double rho_ref, double theta_ref,
                               const GasParams& gas);

/// sum_K |K| [ rho |u - u_ref|^2 / 2 + E(rho, theta | rho_ref, theta_ref) ] >= 0
double relative_energy(const State& state, const State& reference, const GasParams& gas);

}  // namespace fvnsf
