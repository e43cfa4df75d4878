#pragma once

#include <span>
#include <vector>

#include "fvnsf/mesh.hpp"
#include "fvnsf/quadrature.hpp"

namespace fvnsf {

/// Piecewise-constant data on cells: `components` values per cell, stored
/// component-major (structure of arrays). Vectors have d components, tensors
/// d*d stored row-major (component j*d + i is entry (j, i)).
class CellField {
 public:
  CellField() = default;
  explicit CellField(GridPtr grid, int components = 1, double value = 0.0);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  Index cells() const noexcept { return cells_; }

  double& operator()(Index cell) noexcept { return data_[cell]; }
  double operator()(Index cell) const noexcept { return data_[cell]; }
  double& at(int comp, Index cell) noexcept { return data_[comp * cells_ + cell]; }
  double at(int comp, Index cell) const noexcept { return data_[comp * cells_ + cell]; }

  std::span<double> component(int comp) noexcept {
    return {data_.data() + comp * cells_, cells_};
  }
  std::span<const double> component(int comp) const noexcept {
    return {data_.data() + comp * cells_, cells_};
  }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  CellField& operator+=(const CellField& other);
  CellField& operator-=(const CellField& other);
  CellField& operator*=(double s) noexcept;

  friend CellField operator+(CellField a, const CellField& b) { return a += b; }
  friend CellField operator-(CellField a, const CellField& b) { return a -= b; }
  friend CellField operator*(double s, CellField a) { return a *= s; }

 private:
  GridPtr grid_;
  int components_ = 0;
  Index cells_ = 0;
  std::vector<double> data_;
};

/// One value per face, i.e. per dual cell D_sigma (|D_sigma| = h^d). For a
/// vector-valued face quantity the components are stored like CellField.
class FaceField {
 public:
  FaceField() = default;
  explicit FaceField(GridPtr grid, int components = 1, double value = 0.0);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  Index faces() const noexcept { return faces_; }

  double& operator()(Index face) noexcept { return data_[face]; }
  double operator()(Index face) const noexcept { return data_[face]; }
  double& at(int comp, Index face) noexcept { return data_[comp * faces_ + face]; }
  double at(int comp, Index face) const noexcept { return data_[comp * faces_ + face]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

 private:
  GridPtr grid_;
  int components_ = 0;
  Index faces_ = 0;
  std::vector<double> data_;
};

void require_same_grid(const Grid& a, const Grid& b);

/// Cell means (Pi_Q) of a periodic function, one component per sampler.
CellField project_Q(const ScalarFunction& f, const GridPtr& grid);
CellField project_Q(std::span<const ScalarFunction> components, const GridPtr& grid);

/// Face means (Pi_W): faces orthogonal to e_i carry the mean of phi_i.
FaceField project_W(std::span<const ScalarFunction> phi, const GridPtr& grid);

struct Traces {
  double in;
  double out;
  double jump;     // out - in
  double average;  // (in + out) / 2
};

Traces face_traces(const CellField& field, const Face& face, int comp = 0);

/// v_in for positive normal speed, v_out for negative, the average at zero.
double upwind_value(const CellField& field, const Face& face, double normal_speed,
                    int comp = 0);

inline double upwind_value(double in, double out, double normal_speed) noexcept {
  if (normal_speed > 0.0) return in;
  if (normal_speed < 0.0) return out;
  return 0.5 * (in + out);
}

/// \int r over the torus for one component.
double integrate(const CellField& field, int comp = 0);
/// L2 inner product summed over all components.
double inner(const CellField& a, const CellField& b);
double inner(const FaceField& a, const FaceField& b);
double l2_norm(const CellField& field);
double l2_norm(const FaceField& field);

double min_value(const CellField& field, int comp = 0);
double max_value(const CellField& field, int comp = 0);

}  // namespace fvnsf
