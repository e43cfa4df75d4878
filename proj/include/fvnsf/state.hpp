#pragma once

#include "fvnsf/fields.hpp"

namespace fvnsf {

/// Numerical solution at one time level: density, velocity (d components),
/// temperature.
struct State {
  CellField rho;
  CellField u;
  CellField theta;
  double t = 0.0;

  const Grid& grid() const noexcept { return rho.grid(); }
  const GridPtr& grid_ptr() const noexcept { return rho.grid_ptr(); }
};

inline State uniform_state(const GridPtr& grid, double rho, double velocity, double theta) {
  return State{CellField(grid, 1, rho), CellField(grid, grid->dim(), velocity),
               CellField(grid, 1, theta), 0.0};
}

}  // namespace fvnsf
