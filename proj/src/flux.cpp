#include "fvnsf/flux.hpp"

#include <stdexcept>

namespace fvnsf {

void FluxParams::validate() const {
  if (!(eps > -1.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (-1, 1)");
  if (!(h > 0.0)) throw std::invalid_argument("mesh width must be positive");
}

double normal_speed(const CellField& u, const Face& face) {
  return 0.5 * (u.at(face.axis, face.in_cell) + u.at(face.axis, face.out_cell));
}

double upwind_flux(const CellField& r, const CellField& u, const Face& face, int comp) {
  return upwind_flux_value(r.at(comp, face.in_cell), r.at(comp, face.out_cell),
                           normal_speed(u, face));
}

double diffusive_flux(const CellField& r, const CellField& u, const Face& face,
                      const FluxParams& params, int comp) {
  return diffusive_flux_value(r.at(comp, face.in_cell), r.at(comp, face.out_cell),
                              normal_speed(u, face), params.diffusion());
}

CellField flux_divergence(const CellField& r, const CellField& u, const FluxParams& params) {
  const Grid& g = r.grid();
  require_same_grid(g, u.grid());
  const double h_eps = params.diffusion();
  const double area = g.face_area();
  CellField out(r.grid_ptr(), r.components());
  for (Index id = 0; id < g.num_faces(); ++id) {
    Face f = g.face(id);
    const double s = normal_speed(u, f);
    for (int c = 0; c < r.components(); ++c) {
      const double flux =
          area * diffusive_flux_value(r.at(c, f.in_cell), r.at(c, f.out_cell), s, h_eps);
      out.at(c, f.in_cell) += flux;
      out.at(c, f.out_cell) -= flux;
    }
  }
  return out;
}

}  // namespace fvnsf
