#include "fvnsf/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fvnsf {

namespace {

void require_positive(double rho, double theta, const char* what) {
  if (!(rho > 0.0) || !(theta > 0.0)) {
    throw std::domain_error(std::string(what) + " needs rho > 0 and theta > 0 (rho=" +
                            std::to_string(rho) + ", theta=" + std::to_string(theta) + ")");
  }
}

}  // namespace

void GasParams::validate() const {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be > 1");
  }
}

double entropy(double rho, double theta, const GasParams& gas) {
  require_positive(rho, theta, "entropy");
  return gas.cv() * std::log(theta) - std::log(rho);
}

Matrix2 entropy_hessian(double rho, double theta, const GasParams& gas) {
  require_positive(rho, theta, "entropy_hessian");
  const double cv = gas.cv();
  const double off = -cv / (rho * theta);
  return {{{(1.0 + cv) / rho, off}, {off, cv / (rho * theta * theta)}}};
}

std::array<double, 2> symmetric_eigenvalues(const Matrix2& m) {
  const double tr = m[0][0] + m[1][1];
  const double half_diff = 0.5 * (m[0][0] - m[1][1]);
  const double disc = std::sqrt(half_diff * half_diff + m[0][1] * m[1][0]);
  const double hi = 0.5 * tr + disc;
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  // small root from the determinant avoids cancellation
  const double lo = hi != 0.0 ? det / hi : 0.5 * tr - disc;
  return {lo, hi};
}

HessianBounds hessian_bounds(double rho, double theta, const GasParams& gas) {
  require_positive(rho, theta, "hessian_bounds");
  const double cv = gas.cv();
  const double t2 = theta * theta;
  return {std::min(1.0 / ((2.0 + cv) * rho), cv / ((2.0 + cv) * rho * t2)),
          (cv + (1.0 + cv) * t2) / (rho * t2)};
}

double ballistic_energy(double rho, double theta, double theta_ref, const GasParams& gas) {
  require_positive(rho, theta, "ballistic_energy");
  if (!(theta_ref > 0.0)) throw std::domain_error("ballistic_energy needs theta_ref > 0");
  return rho * (gas.cv() * theta - theta_ref * entropy(rho, theta, gas));
}

double ballistic_energy_drho(double rho, double theta, double theta_ref, const GasParams& gas) {
  require_positive(rho, theta, "ballistic_energy_drho");
  if (!(theta_ref > 0.0)) throw std::domain_error("ballistic_energy_drho needs theta_ref > 0");
  return gas.cv() * theta - theta_ref * (entropy(rho, theta, gas) - 1.0);
}

double relative_energy_density(double rho, double theta, double rho_ref, double theta_ref,
                               const GasParams& gas) {
  require_positive(rho, theta, "relative_energy");
  require_positive(rho_ref, theta_ref, "relative_energy");
  // Expanding H - dH/drho (rho - rho_ref) - H_ref gives
  //   rho c_v theta_ref (x - 1 - log x) + theta_ref (rho log(rho/rho_ref) - rho + rho_ref)
  // with x = theta / theta_ref; both brackets are >= 0 and free of cancellation.
  const double x1 = (theta - theta_ref) / theta_ref;
  const double thermal = x1 - std::log1p(x1);
  const double r1 = (rho - rho_ref) / rho_ref;
  // rho log(rho/rho_ref) - rho + rho_ref = rho_ref ((1+r) log1p(r) - r)
  const double mass = (1.0 + r1) * std::log1p(r1) - r1;
  return rho * gas.cv() * theta_ref * thermal + theta_ref * rho_ref * mass;
}

double relative_energy(const State& state, const State& reference, const GasParams& gas) {
  require_same_grid(state.grid(), reference.grid());
  const Grid& g = state.grid();
  const int d = g.dim();
  double sum = 0.0;
  for (Index k = 0; k < g.num_cells(); ++k) {
    double du2 = 0.0;
    for (int i = 0; i < d; ++i) {
      double du = state.u.at(i, k) - reference.u.at(i, k);
      du2 += du * du;
    }
    sum += 0.5 * state.rho(k) * du2 +
           relative_energy_density(state.rho(k), state.theta(k), reference.rho(k),
                                   reference.theta(k), gas);
  }
  return sum * g.cell_volume();
}

}  // namespace fvnsf
