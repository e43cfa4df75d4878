#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace fvnsf {

using Index = std::size_t;
using Point = std::array<double, 3>;

/// Face between `in_cell` and its +e_axis neighbour `out_cell`. The normal
/// n = e_axis points from in to out.
struct Face {
  int axis = 0;
  Index in_cell = 0;
  Index out_cell = 0;
};

/// Uniform periodic Cartesian mesh of the unit torus [0,1)^d.
///
/// Cells are numbered row-major over their coordinate tuple (axis 0 slowest).
/// Faces are grouped by axis: face id `axis * num_cells() + K` is the face on
/// the +e_axis side of cell K, so every axis block has exactly one face per
/// cell. The object is immutable after construction.
class Grid {
 public:
  Grid(int dim, int cells_per_axis);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }

  Index num_cells() const noexcept { return num_cells_; }
  Index num_faces() const noexcept { return num_cells_ * static_cast<Index>(dim_); }

  /// |K| = h^d
  double cell_volume() const noexcept { return cell_volume_; }
  /// |sigma| = h^(d-1)
  double face_area() const noexcept { return face_area_; }

  std::array<int, 3> coords(Index cell) const noexcept;
  /// Cell with the given coordinates, wrapped periodically.
  Index cell_at(std::array<int, 3> c) const noexcept;

  Index plus(int axis, Index cell) const noexcept { return plus_[axis][cell]; }
  Index minus(int axis, Index cell) const noexcept { return minus_[axis][cell]; }

  Point cell_center(Index cell) const noexcept;

  Index face_id(int axis, Index in_cell) const noexcept {
    return static_cast<Index>(axis) * num_cells_ + in_cell;
  }
  Face face(Index id) const noexcept;
  Point face_center(const Face& f) const noexcept;

 private:
  int dim_;
  int n_;
  double h_;
  Index num_cells_;
  double cell_volume_;
  double face_area_;
  std::array<Index, 3> stride_{};
  std::array<std::vector<Index>, 3> plus_;
  std::array<std::vector<Index>, 3> minus_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws std::invalid_argument unless d is 2 or 3 and N >= 2.
GridPtr build_grid(int dim, int cells_per_axis);

/// The two cells adjacent to face `id` with the fixed orientation in -> out.
Face face_cells(const Grid& grid, Index id);

}  // namespace fvnsf
