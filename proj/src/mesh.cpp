#include "fvnsf/mesh.hpp"

#include <stdexcept>
#include <string>

namespace fvnsf {

Grid::Grid(int dim, int cells_per_axis) : dim_(dim), n_(cells_per_axis) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (cells_per_axis < 2) {
    throw std::invalid_argument("grid needs at least 2 cells per axis, got " +
                                std::to_string(cells_per_axis));
  }
  h_ = 1.0 / n_;
  num_cells_ = 1;
  for (int a = 0; a < dim_; ++a) num_cells_ *= static_cast<Index>(n_);
  cell_volume_ = 1.0;
  face_area_ = 1.0;
  for (int a = 0; a < dim_; ++a) {
    cell_volume_ *= h_;
    if (a > 0) face_area_ *= h_;
  }

  // row-major: axis 0 slowest
  Index s = 1;
  for (int a = dim_ - 1; a >= 0; --a) {
    stride_[a] = s;
    s *= static_cast<Index>(n_);
  }

  for (int a = 0; a < dim_; ++a) {
    plus_[a].resize(num_cells_);
    minus_[a].resize(num_cells_);
    for (Index k = 0; k < num_cells_; ++k) {
      auto c = coords(k);
      auto cp = c;
      auto cm = c;
      cp[a] += 1;
      cm[a] -= 1;
      plus_[a][k] = cell_at(cp);
      minus_[a][k] = cell_at(cm);
    }
  }
}

std::array<int, 3> Grid::coords(Index cell) const noexcept {
  std::array<int, 3> c{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    c[a] = static_cast<int>((cell / stride_[a]) % static_cast<Index>(n_));
  }
  return c;
}

Index Grid::cell_at(std::array<int, 3> c) const noexcept {
  Index k = 0;
  for (int a = 0; a < dim_; ++a) {
    int v = c[a] % n_;
    if (v < 0) v += n_;
    k += static_cast<Index>(v) * stride_[a];
  }
  return k;
}

Point Grid::cell_center(Index cell) const noexcept {
  auto c = coords(cell);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = (c[a] + 0.5) * h_;
  return x;
}

Face Grid::face(Index id) const noexcept {
  Face f;
  f.axis = static_cast<int>(id / num_cells_);
  f.in_cell = id % num_cells_;
  f.out_cell = plus_[f.axis][f.in_cell];
  return f;
}

Point Grid::face_center(const Face& f) const noexcept {
  Point x = cell_center(f.in_cell);
  x[f.axis] += 0.5 * h_;
  return x;
}

GridPtr build_grid(int dim, int cells_per_axis) {
  return std::make_shared<const Grid>(dim, cells_per_axis);
}

Face face_cells(const Grid& grid, Index id) { return grid.face(id); }

}  // namespace fvnsf
