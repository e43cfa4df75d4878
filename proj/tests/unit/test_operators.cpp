#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fvnsf/operators.hpp"

using namespace fvnsf;

namespace {
constexpr double tp = 2.0 * std::numbers::pi;

CellField random_field(const GridPtr& g, int comps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CellField f(g, comps);
  for (double& v : f.values()) v = u(rng);
  return f;
}

// neighbour by explicit coordinate arithmetic (independent of the grid tables)
Index shifted(const Grid& g, Index k, int axis, int by) {
  auto c = g.coords(k);
  c[axis] = ((c[axis] + by) % g.n() + g.n()) % g.n();
  return g.cell_at(c);
}
}  // namespace

TEST_CASE("operators annihilate constants") {
  for (int d : {2, 3}) {
    auto g = build_grid(d, 4);
    CellField c(g, 1, 2.5), v(g, d, -1.0);
    const CellField gc = grad_h(c), dv = div_h(v), lc = laplace_h(c);
    const FaceField ec = grad_E(c);
    for (double x : gc.values()) CHECK(x == 0.0);
    for (double x : dv.values()) CHECK(x == 0.0);
    for (double x : ec.values()) CHECK(x == 0.0);
    for (double x : lc.values()) CHECK(x == 0.0);
    TensorCalculus tc = tensor_calculus(v);
    for (double x : tc.gradient.values()) CHECK(x == 0.0);
    for (double x : tc.symmetric.values()) CHECK(x == 0.0);
    for (double x : tc.divergence.values()) CHECK(x == 0.0);
  }
}

TEST_CASE("grad_h is the central difference") {
  auto g = build_grid(2, 16);
  CellField r(g);
  for (Index k = 0; k < r.cells(); ++k) r(k) = std::sin(tp * g->cell_center(k)[0]);
  CellField gr = grad_h(r);
  for (Index k = 0; k < r.cells(); ++k) {
    const double oracle = (r(shifted(*g, k, 0, 1)) - r(shifted(*g, k, 0, -1))) / (2.0 * g->h());
    CHECK(gr.at(0, k) == oracle);
    CHECK(gr.at(1, k) == 0.0);
  }
}

TEST_CASE("duality of grad_h and div_h") {
  for (int d : {2, 3}) {
    auto g = build_grid(d, d == 2 ? 8 : 4);
    for (unsigned s = 0; s < 10; ++s) {
      CellField r = random_field(g, 1, s), v = random_field(g, d, 100 + s);
      const double res = inner(r, div_h(v)) + inner(grad_h(r), v);
      CHECK(std::abs(res) <= 1e-13 * l2_norm(r) * l2_norm(v) / g->h());
      double total = 0.0;
      const CellField dv = div_h(v);
      for (double x : dv.values()) total += x;
      CHECK(std::abs(total) * g->cell_volume() <= 1e-13);
    }
  }
}

TEST_CASE("div_h of grad_h is the wide Laplacian") {
  auto g = build_grid(2, 8);
  CellField r = random_field(g, 1, 3);
  CellField w = div_h(grad_h(r));
  const double h = g->h();
  for (Index k = 0; k < r.cells(); ++k) {
    double o = 0.0;
    for (int a = 0; a < 2; ++a) {
      o += (r(shifted(*g, k, a, 2)) - 2.0 * r(k) + r(shifted(*g, k, a, -2))) / (4.0 * h * h);
    }
    CHECK(w(k) == doctest::Approx(o).epsilon(1e-12));
  }
}

TEST_CASE("grad_E difference quotient and its decay") {
  auto g = build_grid(2, 4);
  CellField r(g);
  Face f = g->face(g->face_id(1, 5));
  r(f.in_cell) = 1.0;
  r(f.out_cell) = 3.0;
  CHECK(grad_E(r)(g->face_id(1, 5)) == 8.0);

  double prev = 0.0;
  for (int n : {8, 16, 32, 64}) {
    auto gn = build_grid(2, n);
    FaceField ge = grad_E(project_Q([](const Point& x) { return std::sin(tp * x[0]); }, gn));
    double sup = 0.0;
    for (Index id = 0; id < gn->num_faces(); ++id) {
      Face fc = gn->face(id);
      Point c = gn->face_center(fc);
      for (double s : {-0.5, 0.0, 0.5}) {
        Point x = c;
        x[fc.axis] += s * gn->h();
        const double exact = fc.axis == 0 ? tp * std::cos(tp * x[0]) : 0.0;
        sup = std::max(sup, std::abs(ge(id) - exact));
      }
    }
    if (prev > 0.0) CHECK(std::log2(prev / sup) >= 0.95);
    prev = sup;
  }
}

TEST_CASE("laplace spike stencil") {
  auto g = build_grid(2, 4);
  CellField r(g);
  const Index k = g->cell_at({1, 2, 0});
  r(k) = 1.0;
  CellField l = laplace_h(r);
  CHECK(l(k) == -64.0);
  for (int a = 0; a < 2; ++a) {
    CHECK(l(shifted(*g, k, a, 1)) == 16.0);
    CHECK(l(shifted(*g, k, a, -1)) == 16.0);
  }
  CHECK(l(g->cell_at({3, 0, 0})) == 0.0);
}

TEST_CASE("summation by parts and composition") {
  for (int d : {2, 3}) {
    auto g = build_grid(d, d == 2 ? 8 : 4);
    CellField r = random_field(g, 1, 11), f = random_field(g, 1, 12);
    const double a = inner(laplace_h(r), f);
    const double b = -inner(grad_E(r), grad_E(f));
    const double c = inner(r, laplace_h(f));
    const double scale = l2_norm(r) * l2_norm(f) / (g->h() * g->h());
    CHECK(std::abs(a - b) <= 1e-13 * scale);
    CHECK(std::abs(a - c) <= 1e-13 * scale);
    CellField comp = div_E(grad_E(r));
    CellField l = laplace_h(r);
    for (Index k = 0; k < l.cells(); ++k) CHECK(comp(k) == doctest::Approx(l(k)).epsilon(1e-13));
  }
}

TEST_CASE("duality with Pi_W of a smooth field") {
  auto g = build_grid(3, 4);
  std::vector<ScalarFunction> phi{
      [](const Point& x) { return std::sin(tp * (x[0] + 2 * x[1])); },
      [](const Point& x) { return std::cos(tp * (x[1] - x[2])); },
      [](const Point& x) { return std::sin(tp * 2 * x[2]) * std::cos(tp * x[0]); }};
  ScalarFunction div = [](const Point& x) {
    return tp * std::cos(tp * (x[0] + 2 * x[1])) - tp * std::sin(tp * (x[1] - x[2])) +
           2 * tp * std::cos(tp * 2 * x[2]) * std::cos(tp * x[0]);
  };
  CellField r = random_field(g, 1, 5);
  const double lhs = inner(r, project_Q(div, g));
  const double rhs = -inner(grad_E(r), project_W(phi, g));
  CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + l2_norm(r)));
}

TEST_CASE("tensor calculus identities") {
  for (int d : {2, 3}) {
    auto g = build_grid(d, 4);
    CellField u = random_field(g, d, 21);
    TensorCalculus tc = tensor_calculus(u);
    CellField du = div_h(u);
    double gg = 0.0;
    for (Index k = 0; k < u.cells(); ++k) {
      double tr_d = 0.0, tr_g = 0.0;
      for (int i = 0; i < d; ++i) {
        tr_d += tc.symmetric.at(i * d + i, k);
        tr_g += tc.gradient.at(i * d + i, k);
        for (int j = 0; j < d; ++j) gg += tc.gradient.at(j * d + i, k) * tc.gradient.at(i * d + j, k);
      }
      CHECK(tr_d == doctest::Approx(du(k)).epsilon(1e-14));
      CHECK(tr_g == doctest::Approx(du(k)).epsilon(1e-14));
      CHECK(tc.divergence(k) == doctest::Approx(du(k)).epsilon(1e-14));
    }
    gg *= g->cell_volume();
    const double nd = l2_norm(du);
    CHECK(gg == doctest::Approx(nd * nd).epsilon(1e-12));
    CHECK(gg >= 0.0);
  }
}

TEST_CASE("operators commute with translations") {
  auto g = build_grid(2, 8);
  CellField r = random_field(g, 1, 31);
  CellField t(g);
  for (Index k = 0; k < r.cells(); ++k) t(shifted(*g, k, 1, 1)) = r(k);
  CellField a = laplace_h(r), b = laplace_h(t);
  CellField ga = grad_h(r), gb = grad_h(t);
  for (Index k = 0; k < r.cells(); ++k) {
    CHECK(b(shifted(*g, k, 1, 1)) == a(k));
    CHECK(gb.at(0, shifted(*g, k, 1, 1)) == ga.at(0, k));
  }
}
