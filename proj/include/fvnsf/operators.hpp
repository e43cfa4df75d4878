#pragma once

#include "fvnsf/fields.hpp"

namespace fvnsf {

/// Cell-centred gradient (nabla_h r)_K = |sigma|/|K| sum <r> n, i.e. the
/// central difference (r_{K+e_i} - r_{K-e_i}) / 2h. A field with m components
/// yields m*d components (row j holds the gradient of component j).
CellField grad_h(const CellField& r);

/// (div_h v)_K = |sigma|/|K| sum <v>.n. The component count must be a
/// multiple of d; tensors are reduced row by row.
CellField div_h(const CellField& v);

/// Normal difference quotient on faces, [[r]] / h, per component.
FaceField grad_E(const CellField& r);

/// Divergence of a face (dual-grid) field: (1/h) sum_i (w_{K+1/2} - w_{K-1/2}).
CellField div_E(const FaceField& w);

/// Compact (2d+1)-point Laplacian div_h(grad_E r), per component.
CellField laplace_h(const CellField& r);

struct TensorCalculus {
  CellField gradient;   // nabla_h u, row-major d*d
  CellField symmetric;  // D_h(u) = (nabla_h u + nabla_h^T u) / 2
  CellField divergence;
};

TensorCalculus tensor_calculus(const CellField& u);

}  // namespace fvnsf
