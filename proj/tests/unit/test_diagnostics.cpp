#include <cmath>
#include <numbers>
#include <cstring>
#include <random>

#include "doctest.h"
#include "fvnsf/diagnostics.hpp"
#include "fvnsf/presets.hpp"

using namespace fvnsf;

namespace {

State smooth_wave(int n, const SchemeParams& p) {
  InitialData ic = make_preset("smooth-wave", 2);
  return initial_state(ic.rho, ic.u, ic.theta, build_grid(2, n), p);
}

}  // namespace

TEST_CASE("uniform state has no dissipation") {
  SchemeParams p;
  p.alpha = 0.5;
  auto g = build_grid(2, 4);
  State s = uniform_state(g, 1.0, 0.3, 2.0);
  DiagnosticsRecord r = record(s, s, p);
  CHECK(r.diss_eps == 0.0);
  CHECK(r.diss_dt == 0.0);
  CHECK(r.diss_up == 0.0);
  CHECK(r.diss_alpha == 0.0);
  CHECK(r.energy_rate == 0.0);
  CHECK(r.energy_residual == 0.0);
  CHECK(r.entropy_kappa == 0.0);
  CHECK(r.entropy_viscous == 0.0);
  CHECK(r.entropy_prod == 0.0);
  CHECK(r.mass == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.e_kin == doctest::Approx(0.5 * 2 * 0.09));
  CHECK(r.e_int == doctest::Approx(p.gas.cv() * 2.0));
  CHECK(r.p_min == doctest::Approx(2.0));
  CHECK(r.s_max == doctest::Approx(p.gas.cv() * std::log(2.0)));
}

TEST_CASE("record terms against hand oracles") {
  SchemeParams p;
  p.eps = 0.5;
  p.alpha = 1.0;
  p.dt = 0.1;
  auto g = build_grid(2, 4);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(0.5, 2.0), vel(-1.0, 1.0);
  State a = uniform_state(g, 1.0, 0.0, 1.0), b = a;
  for (State* s : {&a, &b}) {
    for (double& v : s->rho.values()) v = pos(rng);
    for (double& v : s->theta.values()) v = pos(rng);
    for (double& v : s->u.values()) v = vel(rng);
  }
  DiagnosticsRecord r = record(a, b, p, {}, 3);
  CHECK(r.step == 3);
  CHECK(r.e_tot == r.e_kin + r.e_int);

  // kappa term: - sum |sigma| kappa / h [[theta]]^2 / (theta_in theta_out)
  const double h = g->h();
  double kap = 0.0, jump_u2 = 0.0;
  for (Index k = 0; k < g->num_cells(); ++k) {
    auto c = g->coords(k);
    for (int ax = 0; ax < 2; ++ax) {
      auto co = c;
      co[ax] = (co[ax] + 1) % 4;
      const Index o = g->cell_at(co);
      const double ti = b.theta(k), to = b.theta(o);
      kap -= h * p.kappa / h * (to - ti) * (to - ti) / (ti * to);
      for (int j = 0; j < 2; ++j) jump_u2 += (b.u.at(j, o) - b.u.at(j, k)) * (b.u.at(j, o) - b.u.at(j, k));
    }
  }
  CHECK(r.entropy_kappa == doctest::Approx(kap).epsilon(1e-13));
  CHECK(r.entropy_kappa <= 0.0);
  // h^alpha |D_sigma| |[[u]]/h|^2 with |D_sigma| = h^2
  CHECK(r.diss_alpha == doctest::Approx(h * jump_u2).epsilon(1e-13));
  CHECK(r.entropy_viscous >= 0.0);
  CHECK(r.diss_eps >= 0.0);
  CHECK(r.diss_up >= 0.0);

  double e_prev = 0.0;
  for (Index k = 0; k < g->num_cells(); ++k) {
    e_prev += h * h * (0.5 * a.rho(k) * (a.u.at(0, k) * a.u.at(0, k) + a.u.at(1, k) * a.u.at(1, k)) +
                       p.gas.cv() * a.rho(k) * a.theta(k));
  }
  CHECK(r.energy_rate == doctest::Approx((r.e_tot - e_prev) / p.dt).epsilon(1e-12));

  DiagnosticsRecord again = record(a, b, p, {}, 3);
  CHECK(std::memcmp(&again.energy_residual, &r.energy_residual, sizeof(double)) == 0);
  CHECK(std::memcmp(&again.entropy_prod, &r.entropy_prod, sizeof(double)) == 0);
}

TEST_CASE("hessian bounds check margins") {
  GasParams gas{5.0 / 3.0};
  auto g = build_grid(2, 2);
  State s = uniform_state(g, 1.0, 0.0, 1.0);
  HessianMargin m = hessian_bounds_check(s, gas);
  const double lo = (2.0 - std::sqrt(2.5)) - 1.0 / 3.5;
  const double hi = 4.0 - (2.0 + std::sqrt(2.5));
  CHECK(m.lower == doctest::Approx(lo));
  CHECK(m.upper == doctest::Approx(hi));
  CHECK(m.ok());
  State s2 = uniform_state(g, 2.0, 0.0, 1.0);
  HessianMargin m2 = hessian_bounds_check(s2, gas);
  CHECK(m2.lower == doctest::Approx(lo / 2));
  CHECK(m2.upper == doctest::Approx(hi / 2));
}

TEST_CASE("bounds window") {
  GasParams gas{1.4};
  auto g = build_grid(2, 2);
  BoundsWindow w;
  CHECK(w.empty);
  State a = uniform_state(g, 1.0, 0.0, 1.0);
  a.rho(0) = 0.5;
  a.theta(3) = 2.0;
  State b = uniform_state(g, 1.5, 0.0, 0.8);
  w.include(a);
  w.include(b);
  CHECK(w.rho_min == 0.5);
  CHECK(w.rho_max == 1.5);
  CHECK(w.theta_min == 0.8);
  CHECK(w.theta_max == 2.0);
  CHECK(w.pressure_lower() == 0.4);
  CHECK(w.pressure_upper() == 3.0);
  CHECK(w.entropy_lower(gas) == doctest::Approx(gas.cv() * std::log(0.8) - std::log(1.5)));
  CHECK(w.entropy_upper(gas) == doctest::Approx(gas.cv() * std::log(2.0) - std::log(0.5)));
  CHECK(w.contains_derived(a, gas));
  CHECK(w.contains_derived(b, gas));
  CHECK_FALSE(w.contains_derived(uniform_state(g, 3.0, 0.0, 3.0), gas));
  CHECK_FALSE(BoundsWindow{}.contains_derived(a, gas));
}

TEST_CASE("consistency accumulator") {
  SchemeParams p;
  p.dt = 1.0 / 64;
  State s = smooth_wave(8, p);
  auto tests = builtin_test_functions(2);
  CHECK(tests.size() == 6);
  CHECK(builtin_test_functions(3).size() == 7);
  ConsistencyAccumulator acc(tests, p, s);
  double pi_sum = 0.0;
  std::vector<State> hist{s};
  for (int k = 1; k <= 4; ++k) {
    auto [n, st] = step(s, p);
    n.t = k * p.dt;
    acc.add(s, n);
    pi_sum += p.dt * record(s, n, p, st, k).entropy_prod;
    s = std::move(n);
    hist.push_back(s);
  }
  ConsistencyReport r = acc.report();
  CHECK(r.tau == doctest::Approx(4 * p.dt));
  CHECK(r.entries.size() == tests.size());
  CHECK(std::abs(r.entries[0].e_rho) <= 1e-13);
  CHECK(r.entries[0].e_m_norm <= 1e-12);
  CHECK(r.entropy_defect("one") == doctest::Approx(pi_sum).epsilon(1e-9));
  CHECK(r.entropy_defect("one") >= 0.0);
  CHECK_THROWS_AS(r.entropy_defect("sin_x1"), std::invalid_argument);

  ConsistencyReport q = consistency_residuals(hist, tests, p);
  CHECK(q.max_e_rho() == r.max_e_rho());
  CHECK(q.max_e_m() == r.max_e_m());

  std::vector<TestFunction> bad{{"neg", [](double, const Point&) { return -1.0; },
                                 [](double, const Point&) { return Point{}; }, true}};
  ConsistencyAccumulator bacc(bad, p, hist[0]);
  CHECK_THROWS(bacc.add(hist[0], hist[1]));
}
