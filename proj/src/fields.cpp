#include "fvnsf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fvnsf {

CellField::CellField(GridPtr grid, int components, double value)
    : grid_(std::move(grid)), components_(components) {
  if (!grid_) throw std::invalid_argument("CellField needs a grid");
  if (components < 1) throw std::invalid_argument("CellField needs at least one component");
  cells_ = grid_->num_cells();
  data_.assign(cells_ * static_cast<Index>(components_), value);
}

CellField& CellField::operator+=(const CellField& other) {
  if (other.data_.size() != data_.size()) throw std::invalid_argument("CellField size mismatch");
  for (Index i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CellField& CellField::operator-=(const CellField& other) {
  if (other.data_.size() != data_.size()) throw std::invalid_argument("CellField size mismatch");
  for (Index i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CellField& CellField::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

FaceField::FaceField(GridPtr grid, int components, double value)
    : grid_(std::move(grid)), components_(components) {
  if (!grid_) throw std::invalid_argument("FaceField needs a grid");
  if (components < 1) throw std::invalid_argument("FaceField needs at least one component");
  faces_ = grid_->num_faces();
  data_.assign(faces_ * static_cast<Index>(components_), value);
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (&a != &b && (a.dim() != b.dim() || a.n() != b.n())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

CellField project_Q(const ScalarFunction& f, const GridPtr& grid) {
  return project_Q(std::span<const ScalarFunction>(&f, 1), grid);
}

CellField project_Q(std::span<const ScalarFunction> components, const GridPtr& grid) {
  const auto& g = *grid;
  const auto& rule = projection_rule();
  CellField out(grid, static_cast<int>(components.size()));
  Point width{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) width[a] = g.h();
  for (Index k = 0; k < g.num_cells(); ++k) {
    Point lo = g.cell_center(k);
    for (int a = 0; a < g.dim(); ++a) lo[a] -= 0.5 * g.h();
    for (int c = 0; c < out.components(); ++c) {
      out.at(c, k) = box_mean(components[c], lo, width, g.dim(), rule);
    }
  }
  return out;
}

FaceField project_W(std::span<const ScalarFunction> phi, const GridPtr& grid) {
  const auto& g = *grid;
  if (static_cast<int>(phi.size()) != g.dim()) {
    throw std::invalid_argument("project_W needs one component per axis");
  }
  const auto& rule = projection_rule();
  FaceField out(grid);
  for (Index id = 0; id < g.num_faces(); ++id) {
    Face f = g.face(id);
    Point lo = g.face_center(f);
    Point width{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) {
      if (a == f.axis) continue;
      lo[a] -= 0.5 * g.h();
      width[a] = g.h();
    }
    out(id) = box_mean(phi[f.axis], lo, width, g.dim(), rule);
  }
  return out;
}

Traces face_traces(const CellField& field, const Face& face, int comp) {
  Traces t;
  t.in = field.at(comp, face.in_cell);
  t.out = field.at(comp, face.out_cell);
  t.jump = t.out - t.in;
  t.average = 0.5 * (t.in + t.out);
  return t;
}

double upwind_value(const CellField& field, const Face& face, double normal_speed, int comp) {
  return upwind_value(field.at(comp, face.in_cell), field.at(comp, face.out_cell), normal_speed);
}

double integrate(const CellField& field, int comp) {
  double s = 0.0;
  for (double v : field.component(comp)) s += v;
  return s * field.grid().cell_volume();
}

double inner(const CellField& a, const CellField& b) {
  require_same_grid(a.grid(), b.grid());
  if (a.components() != b.components()) throw std::invalid_argument("component mismatch");
  auto va = a.values();
  auto vb = b.values();
  double s = 0.0;
  for (Index i = 0; i < va.size(); ++i) s += va[i] * vb[i];
  return s * a.grid().cell_volume();
}

double inner(const FaceField& a, const FaceField& b) {
  require_same_grid(a.grid(), b.grid());
  if (a.components() != b.components()) throw std::invalid_argument("component mismatch");
  auto va = a.values();
  auto vb = b.values();
  double s = 0.0;
  for (Index i = 0; i < va.size(); ++i) s += va[i] * vb[i];
  // |D_sigma| = |K|
  return s * a.grid().cell_volume();
}

double l2_norm(const CellField& field) { return std::sqrt(inner(field, field)); }
double l2_norm(const FaceField& field) { return std::sqrt(inner(field, field)); }

double min_value(const CellField& field, int comp) {
  auto v = field.component(comp);
  return *std::min_element(v.begin(), v.end());
}

double max_value(const CellField& field, int comp) {
  auto v = field.component(comp);
  return *std::max_element(v.begin(), v.end());
}

}  // namespace fvnsf
