#include "fvnsf/operators.hpp"

#include <stdexcept>

namespace fvnsf {

CellField grad_h(const CellField& r) {
  const Grid& g = r.grid();
  const int d = g.dim();
  const double scale = 0.5 / g.h();
  CellField out(r.grid_ptr(), r.components() * d);
  for (int j = 0; j < r.components(); ++j) {
    auto rj = r.component(j);
    for (int i = 0; i < d; ++i) {
      auto o = out.component(j * d + i);
      for (Index k = 0; k < g.num_cells(); ++k) {
        o[k] = scale * (rj[g.plus(i, k)] - rj[g.minus(i, k)]);
      }
    }
  }
  return out;
}

CellField div_h(const CellField& v) {
  const Grid& g = v.grid();
  const int d = g.dim();
  if (v.components() % d != 0) {
    throw std::invalid_argument("div_h needs a vector or tensor field");
  }
  const int rows = v.components() / d;
  const double scale = 0.5 / g.h();
  CellField out(v.grid_ptr(), rows);
  for (int j = 0; j < rows; ++j) {
    auto o = out.component(j);
    for (int i = 0; i < d; ++i) {
      auto vi = v.component(j * d + i);
      for (Index k = 0; k < g.num_cells(); ++k) {
        o[k] += scale * (vi[g.plus(i, k)] - vi[g.minus(i, k)]);
      }
    }
  }
  return out;
}

FaceField grad_E(const CellField& r) {
  const Grid& g = r.grid();
  const double inv_h = 1.0 / g.h();
  FaceField out(r.grid_ptr(), r.components());
  for (int c = 0; c < r.components(); ++c) {
    auto rc = r.component(c);
    for (Index id = 0; id < g.num_faces(); ++id) {
      Face f = g.face(id);
      out.at(c, id) = (rc[f.out_cell] - rc[f.in_cell]) * inv_h;
    }
  }
  return out;
}

CellField div_E(const FaceField& w) {
  const Grid& g = w.grid();
  const double inv_h = 1.0 / g.h();
  CellField out(w.grid_ptr(), w.components());
  for (int c = 0; c < w.components(); ++c) {
    auto o = out.component(c);
    for (int i = 0; i < g.dim(); ++i) {
      for (Index k = 0; k < g.num_cells(); ++k) {
        o[k] += (w.at(c, g.face_id(i, k)) - w.at(c, g.face_id(i, g.minus(i, k)))) * inv_h;
      }
    }
  }
  return out;
}

CellField laplace_h(const CellField& r) {
  const Grid& g = r.grid();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  CellField out(r.grid_ptr(), r.components());
  for (int c = 0; c < r.components(); ++c) {
    auto rc = r.component(c);
    auto o = out.component(c);
    for (int i = 0; i < g.dim(); ++i) {
      for (Index k = 0; k < g.num_cells(); ++k) {
        o[k] += ((rc[g.plus(i, k)] - rc[k]) - (rc[k] - rc[g.minus(i, k)])) * inv_h2;
      }
    }
  }
  return out;
}

TensorCalculus tensor_calculus(const CellField& u) {
  const int d = u.grid().dim();
  if (u.components() != d) throw std::invalid_argument("tensor_calculus needs a vector field");
  TensorCalculus t;
  t.gradient = grad_h(u);
  t.symmetric = CellField(u.grid_ptr(), d * d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      auto s = t.symmetric.component(j * d + i);
      auto a = t.gradient.component(j * d + i);
      auto b = t.gradient.component(i * d + j);
      for (Index k = 0; k < u.cells(); ++k) s[k] = 0.5 * (a[k] + b[k]);
    }
  }
  t.divergence = div_h(u);
  return t;
}

}  // namespace fvnsf
