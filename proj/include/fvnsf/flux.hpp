#pragma once

#include <cmath>

#include "fvnsf/fields.hpp"

namespace fvnsf {

struct FluxParams {
  double eps = 0.0;  // diffusivity exponent in (-1, 1)
  double h = 1.0;

  double diffusion() const { return std::pow(h, eps); }
  void validate() const;
};

/// Up[r, u] = <r> s - |s| [[r]] / 2 for normal speed s = <u>.n
inline double upwind_flux_value(double r_in, double r_out, double speed) noexcept {
  return 0.5 * (r_in + r_out) * speed - 0.5 * std::abs(speed) * (r_out - r_in);
}

/// F = Up[r, u] - h^eps [[r]]
inline double diffusive_flux_value(double r_in, double r_out, double speed,
                                   double h_eps) noexcept {
  return upwind_flux_value(r_in, r_out, speed) - h_eps * (r_out - r_in);
}

/// <u>.n on a face.
double normal_speed(const CellField& u, const Face& face);

double upwind_flux(const CellField& r, const CellField& u, const Face& face, int comp = 0);
double diffusive_flux(const CellField& r, const CellField& u, const Face& face,
                      const FluxParams& params, int comp = 0);

/// Per-cell net outflow sum_{sigma in dK} |sigma| F(r, u) (outward sign), per
/// component of r. Each face flux is evaluated once and applied to both cells.
CellField flux_divergence(const CellField& r, const CellField& u, const FluxParams& params);

}  // namespace fvnsf
