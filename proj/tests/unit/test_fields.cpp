#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fvnsf/fields.hpp"

using namespace fvnsf;

namespace {
constexpr double tp = 2.0 * std::numbers::pi;
}

TEST_CASE("project_Q reproduces constants exactly") {
  for (int d : {2, 3}) {
    auto g = build_grid(d, 4);
    CellField f = project_Q([](const Point&) { return 5.0; }, g);
    for (double v : f.values()) CHECK(v == 5.0);
  }
}

TEST_CASE("project_Q is linear") {
  auto g = build_grid(2, 8);
  ScalarFunction phi = [](const Point& x) { return std::sin(tp * x[0]) * std::cos(tp * x[1]); };
  ScalarFunction psi = [](const Point& x) { return std::exp(std::cos(tp * x[1])); };
  const double a = 0.7, b = -1.3;
  CellField lhs = project_Q([&](const Point& x) { return a * phi(x) + b * psi(x); }, g);
  CellField rhs = a * project_Q(phi, g) + b * project_Q(psi, g);
  for (Index k = 0; k < lhs.cells(); ++k) CHECK(std::abs(lhs(k) - rhs(k)) < 1e-14);
}

TEST_CASE("cell mean of sin matches antiderivative") {
  auto g = build_grid(2, 8);
  CellField f = project_Q([](const Point& x) { return std::sin(tp * x[0]); }, g);
  const double exact = (std::cos(0.0) - std::cos(tp * 0.125)) / (tp * 0.125);
  // cell centred at x1 = 0.0625, any row
  CHECK(std::abs(f(g->cell_at({0, 3, 0})) - exact) <= 1e-10);
  for (int i = 0; i < 8; ++i) {
    const double lo = i * 0.125, hi = lo + 0.125;
    const double e = (std::cos(tp * lo) - std::cos(tp * hi)) / (tp * 0.125);
    CHECK(std::abs(f(g->cell_at({i, 5, 0})) - e) <= 1e-13);
  }
}

TEST_CASE("project_W constants and decay") {
  auto g = build_grid(3, 4);
  std::vector<ScalarFunction> c{[](const Point&) { return 1.0; }, [](const Point&) { return 2.0; },
                                [](const Point&) { return -3.0; }};
  FaceField w = project_W(c, g);
  for (Index id = 0; id < g->num_faces(); ++id) {
    const double expect = std::array<double, 3>{1.0, 2.0, -3.0}[g->face(id).axis];
    CHECK(w(id) == expect);
  }

  // sup |phi - Pi_W phi| over sample points of the dual cells
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    auto gn = build_grid(2, n);
    std::vector<ScalarFunction> phi{[](const Point& x) { return std::sin(tp * x[0]); },
                                     [](const Point& x) { return std::sin(tp * x[1]); }};
    FaceField pw = project_W(phi, gn);
    double sup = 0.0;
    for (Index id = 0; id < gn->num_faces(); ++id) {
      Face f = gn->face(id);
      Point c0 = gn->face_center(f);
      for (double s0 : {-0.5, 0.0, 0.5}) {
        for (double s1 : {-0.5, 0.0, 0.5}) {
          Point x = c0;
          x[0] += s0 * gn->h();
          x[1] += s1 * gn->h();
          sup = std::max(sup, std::abs(std::sin(tp * x[f.axis]) - pw(id)));
        }
      }
    }
    CHECK(sup <= gn->h() * tp);  // h |phi|_{W^{1,inf}}
    if (prev > 0.0) CHECK(std::log2(prev / sup) >= 1.0 - 0.05);
    prev = sup;
  }
}

TEST_CASE("face traces and product rule") {
  auto g = build_grid(2, 4);
  CellField c(g, 1, 3.5);
  Face f = g->face(7);
  Traces t = face_traces(c, f);
  CHECK(t.jump == 0.0);
  CHECK(t.average == 3.5);

  CellField a(g), b(g);
  a(f.in_cell) = 1.0;
  a(f.out_cell) = 3.0;
  b(f.in_cell) = 2.0;
  b(f.out_cell) = 4.0;
  Traces ta = face_traces(a, f);
  CHECK(ta.in == 1.0);
  CHECK(ta.out == 3.0);
  CHECK(ta.jump == 2.0);
  CHECK(ta.average == 2.0);
  CellField ab(g);
  for (Index k = 0; k < ab.cells(); ++k) ab(k) = a(k) * b(k);
  Traces tb = face_traces(b, f);
  CHECK(face_traces(ab, f).jump == 10.0);
  CHECK(ta.jump * tb.average + ta.average * tb.jump == 10.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double& v : a.values()) v = u(rng);
  for (double& v : b.values()) v = u(rng);
  for (Index k = 0; k < ab.cells(); ++k) ab(k) = a(k) * b(k);
  for (Index id = 0; id < g->num_faces(); ++id) {
    Face fc = g->face(id);
    Traces x = face_traces(a, fc), y = face_traces(b, fc);
    CHECK(face_traces(ab, fc).jump == doctest::Approx(x.jump * y.average + x.average * y.jump));
    // swapping orientation negates the jump and keeps the average
    Face sw{fc.axis, fc.out_cell, fc.in_cell};
    Traces z = face_traces(a, sw);
    CHECK(z.jump == -x.jump);
    CHECK(z.average == x.average);
  }
}

TEST_CASE("upwind value tie-break") {
  auto g = build_grid(2, 4);
  CellField v(g);
  Face f = g->face(0);
  v(f.in_cell) = 1.0;
  v(f.out_cell) = 3.0;
  CHECK(upwind_value(v, f, 2.0) == 1.0);
  CHECK(upwind_value(v, f, -2.0) == 3.0);
  CHECK(upwind_value(v, f, 0.0) == 2.0);
}

TEST_CASE("L2 norm is h^{d/2} times the euclidean norm") {
  auto g = build_grid(3, 4);
  CellField f(g, 2);
  double e2 = 0.0;
  int i = 0;
  for (double& v : f.values()) {
    v = std::sin(0.3 * i++);
    e2 += v * v;
  }
  CHECK(l2_norm(f) == doctest::Approx(std::pow(g->h(), 1.5) * std::sqrt(e2)).epsilon(1e-14));
  CHECK(integrate(CellField(g, 1, 2.0)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("mismatched grids rejected") {
  CellField a(build_grid(2, 4)), b(build_grid(2, 8));
  CHECK_THROWS_AS(inner(a, b), std::invalid_argument);
}
