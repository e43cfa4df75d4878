#pragma once

#include <functional>
#include <vector>

#include "fvnsf/mesh.hpp"

namespace fvnsf {

using ScalarFunction = std::function<double(const Point&)>;

/// Gauss-Legendre rule mapped to [0,1]; exact for polynomials of degree 2n-1.
class GaussLegendre {
 public:
  explicit GaussLegendre(int points);

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Points per axis used by the projections. Eight points keep the quadrature
/// error of trigonometric data below 1e-15 relative on the coarsest grids used.
inline constexpr int kProjectionPoints = 8;

const GaussLegendre& projection_rule();

/// Mean of f over the axis-aligned box [lo, lo + width] in `dim` dimensions.
/// Axes with zero width are not integrated (face means).
double box_mean(const ScalarFunction& f, const Point& lo, const Point& width, int dim,
                const GaussLegendre& rule);

}  // namespace fvnsf
