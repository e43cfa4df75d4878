#include "fvnsf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fvnsf/operators.hpp"

namespace fvnsf {

double total_mass(const State& s) { return integrate(s.rho); }

double kinetic_energy(const State& s) {
  const int d = s.grid().dim();
  double e = 0.0;
  for (Index k = 0; k < s.rho.cells(); ++k) {
    double u2 = 0.0;
    for (int j = 0; j < d; ++j) u2 += s.u.at(j, k) * s.u.at(j, k);
    e += 0.5 * s.rho(k) * u2;
  }
  return e * s.grid().cell_volume();
}

double internal_energy(const State& s, const GasParams& gas) {
  double e = 0.0;
  for (Index k = 0; k < s.rho.cells(); ++k) e += s.rho(k) * s.theta(k);
  return gas.cv() * e * s.grid().cell_volume();
}

namespace {

CellField viscous_stress(const CellField& grad, double mu, double lambda) {
  const int d = grad.grid().dim();
  CellField s(grad.grid_ptr(), d * d);
  for (Index k = 0; k < grad.cells(); ++k) {
    double div = 0.0;
    for (int i = 0; i < d; ++i) div += grad.at(i * d + i, k);
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        s.at(j * d + i, k) = mu * (grad.at(j * d + i, k) + grad.at(i * d + j, k)) +
                             (i == j ? lambda * div : 0.0);
      }
    }
  }
  return s;
}

}  // namespace

DiagnosticsRecord record(const State& previous, const State& current, const SchemeParams& params,
                         const StepStats& stats, int step) {
  const Grid& g = current.grid();
  require_same_grid(g, previous.grid());
  const int d = g.dim();
  const Index n = g.num_cells();
  const double vol = g.cell_volume();
  const double area = g.face_area();
  const double dt = params.dt;
  const GasParams& gas = params.gas;

  DiagnosticsRecord r;
  r.step = step;
  r.t = current.t;
  r.mass = total_mass(current);
  r.e_kin = kinetic_energy(current);
  r.e_int = internal_energy(current, gas);
  r.e_tot = r.e_kin + r.e_int;
  r.picard_iters = stats.picard_iterations;
  r.picard_increment = stats.final_increment;

  const double h_eps = params.flux(g).diffusion();
  const double h_alpha = params.alpha ? std::pow(g.h(), *params.alpha) : 0.0;
  double diss_eps = 0.0, diss_up = 0.0, diss_alpha = 0.0, kappa_term = 0.0;
  for (int a = 0; a < d; ++a) {
    for (Index k = 0; k < n; ++k) {
      const Index o = g.plus(a, k);
      double jump2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double jmp = current.u.at(j, o) - current.u.at(j, k);
        jump2 += jmp * jmp;
      }
      const double speed = 0.5 * (current.u.at(a, k) + current.u.at(a, o));
      const double rho_avg = 0.5 * (current.rho(k) + current.rho(o));
      diss_eps += rho_avg * jump2;
      diss_up += upwind_value(current.rho(k), current.rho(o), speed) * std::abs(speed) * jump2;
      diss_alpha += jump2;
      const double th_in = current.theta(k), th_out = current.theta(o);
      kappa_term += (th_out - th_in) * (1.0 / th_out - 1.0 / th_in);
    }
  }
  r.diss_eps = h_eps * area * diss_eps;
  r.diss_up = 0.5 * area * diss_up;
  r.diss_alpha = params.alpha ? h_alpha * vol * diss_alpha / (g.h() * g.h()) : 0.0;
  r.entropy_kappa = area * params.kappa / g.h() * kappa_term;

  double diss_dt = 0.0;
  for (Index k = 0; k < n; ++k) {
    double du2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double du = (current.u.at(j, k) - previous.u.at(j, k)) / dt;
      du2 += du * du;
    }
    diss_dt += previous.rho(k) * du2;
  }
  r.diss_dt = 0.5 * dt * vol * diss_dt;

  const double e_prev = kinetic_energy(previous) + internal_energy(previous, gas);
  r.energy_rate = (r.e_tot - e_prev) / dt;
  r.energy_residual =
      std::abs(r.energy_rate + r.diss_eps + r.diss_dt + r.diss_up + r.diss_alpha);

  TensorCalculus tc = tensor_calculus(current.u);
  CellField stress = viscous_stress(tc.gradient, params.mu, params.lambda);
  double entropy_rate = 0.0, viscous = 0.0;
  r.rho_min = r.theta_min = r.s_min = r.p_min = std::numeric_limits<double>::infinity();
  r.rho_max = r.theta_max = r.s_max = r.p_max = -std::numeric_limits<double>::infinity();
  for (Index k = 0; k < n; ++k) {
    const double rho = current.rho(k), th = current.theta(k);
    r.rho_min = std::min(r.rho_min, rho);
    r.rho_max = std::max(r.rho_max, rho);
    r.theta_min = std::min(r.theta_min, th);
    r.theta_max = std::max(r.theta_max, th);
    const double p = pressure(rho, th);
    r.p_min = std::min(r.p_min, p);
    r.p_max = std::max(r.p_max, p);
    if (rho > 0.0 && th > 0.0) {
      const double s = entropy(rho, th, gas);
      r.s_min = std::min(r.s_min, s);
      r.s_max = std::max(r.s_max, s);
      entropy_rate +=
          rho * s - previous.rho(k) * entropy(previous.rho(k), previous.theta(k), gas);
    }
    double work = 0.0;
    for (int c = 0; c < d * d; ++c) work += stress.at(c, k) * tc.gradient.at(c, k);
    viscous += work / th;
  }
  r.entropy_viscous = vol * viscous;
  r.entropy_prod = vol * entropy_rate / dt + r.entropy_kappa - r.entropy_viscous;
  return r;
}

HessianMargin hessian_bounds_check(const State& state, const GasParams& gas) {
  HessianMargin m{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
  for (Index k = 0; k < state.rho.cells(); ++k) {
    const double rho = state.rho(k), th = state.theta(k);
    const auto ev = symmetric_eigenvalues(entropy_hessian(rho, th, gas));
    const HessianBounds b = hessian_bounds(rho, th, gas);
    m.lower = std::min(m.lower, ev[0] - b.lower);
    m.upper = std::min(m.upper, b.upper - ev[1]);
  }
  return m;
}

void BoundsWindow::include(const State& s) {
  const double r0 = min_value(s.rho), r1 = max_value(s.rho);
  const double t0 = min_value(s.theta), t1 = max_value(s.theta);
  if (empty) {
    rho_min = r0;
    rho_max = r1;
    theta_min = t0;
    theta_max = t1;
    empty = false;
    return;
  }
  rho_min = std::min(rho_min, r0);
  rho_max = std::max(rho_max, r1);
  theta_min = std::min(theta_min, t0);
  theta_max = std::max(theta_max, t1);
}

double BoundsWindow::entropy_lower(const GasParams& gas) const {
  return gas.cv() * std::log(theta_min) - std::log(rho_max);
}

double BoundsWindow::entropy_upper(const GasParams& gas) const {
  return gas.cv() * std::log(theta_max) - std::log(rho_min);
}

bool BoundsWindow::contains_derived(const State& s, const GasParams& gas) const {
  if (empty) return false;
  const double p_lo = pressure_lower(), p_hi = pressure_upper();
  const double s_lo = entropy_lower(gas), s_hi = entropy_upper(gas);
  for (Index k = 0; k < s.rho.cells(); ++k) {
    const double p = pressure(s.rho(k), s.theta(k));
    const double e = entropy(s.rho(k), s.theta(k), gas);
    if (p < p_lo || p > p_hi || e < s_lo || e > s_hi) return false;
  }
  return true;
}

double ConsistencyReport::max_e_rho() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, std::abs(e.e_rho));
  return m;
}

double ConsistencyReport::max_e_m() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.e_m_norm);
  return m;
}

double ConsistencyReport::entropy_defect(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name && e.has_entropy) return e.e_s;
  }
  throw std::invalid_argument("no entropy defect for test function '" + name + "'");
}

namespace {

// Space rule for the test-function integrals (the numerical data are cell-wise
// constant, so this only has to resolve phi).
const GaussLegendre& space_rule() {
  static const GaussLegendre rule(3);
  return rule;
}

const GaussLegendre& time_rule() {
  static const GaussLegendre rule(2);
  return rule;
}

// sum of w * f(x) over a tensor rule placed on the box [lo, lo + width]
template <class F>
void box_quadrature(const Point& lo, const Point& width, int dim, const GaussLegendre& rule,
                    F&& f) {
  const int q = rule.size();
  const int total = dim == 2 ? q * q : q * q * q;
  for (int idx = 0; idx < total; ++idx) {
    int rest = idx;
    Point x{0.0, 0.0, 0.0};
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      const int i = rest % q;
      rest /= q;
      x[a] = lo[a] + width[a] * rule.nodes()[i];
      w *= width[a] * rule.weights()[i];
    }
    f(x, w);
  }
}

Point cell_corner(const Grid& g, Index k) {
  Point c = g.cell_center(k);
  for (int a = 0; a < g.dim(); ++a) c[a] -= 0.5 * g.h();
  return c;
}

// cell integrals of phi(t, .)
std::vector<double> cell_integrals(const Grid& g, const TestFunction& phi, double t) {
  std::vector<double> out(g.num_cells());
  const Point width{g.h(), g.h(), g.dim() == 3 ? g.h() : 0.0};
  for (Index k = 0; k < g.num_cells(); ++k) {
    double s = 0.0;
    box_quadrature(cell_corner(g, k), width, g.dim(), space_rule(),
                   [&](const Point& x, double w) { s += w * phi.value(t, x); });
    out[k] = s;
  }
  return out;
}

// space-time integrals over slab x K of grad phi, component-major (a*n + k)
std::vector<double> cell_gradient_integrals(const Grid& g, const TestFunction& phi, double t0,
                                            double t1) {
  const int d = g.dim();
  const Index n = g.num_cells();
  std::vector<double> out(d * n, 0.0);
  const Point width{g.h(), g.h(), d == 3 ? g.h() : 0.0};
  const GaussLegendre& tr = time_rule();
  for (int q = 0; q < tr.size(); ++q) {
    const double t = t0 + (t1 - t0) * tr.nodes()[q];
    const double wt = (t1 - t0) * tr.weights()[q];
    for (Index k = 0; k < n; ++k) {
      box_quadrature(cell_corner(g, k), width, d, space_rule(), [&](const Point& x, double w) {
        const Point gr = phi.gradient(t, x);
        for (int a = 0; a < d; ++a) out[a * n + k] += wt * w * gr[a];
      });
    }
  }
  return out;
}

}  // namespace

ConsistencyAccumulator::ConsistencyAccumulator(std::vector<TestFunction> tests,
                                               const SchemeParams& params, const State& initial)
    : tests_(std::move(tests)),
      params_(params),
      grid_(initial.grid_ptr()),
      t0_(initial.t),
      t_(initial.t),
      last_(initial) {
  params_.validate();
  const int d = grid_->dim();
  sums_.resize(tests_.size());
  for (std::size_t i = 0; i < tests_.size(); ++i) {
    const TestFunction& phi = tests_[i];
    if (!phi.value || !phi.gradient) {
      throw std::invalid_argument("test function '" + phi.name + "' needs value and gradient");
    }
    Sums& s = sums_[i];
    s.m_lhs0.assign(d, 0.0);
    s.m_rhs.assign(d, 0.0);
    s.rho_lhs0 = pairing(initial.rho, phi, t0_, 0);
    CellField m(grid_, d);
    for (Index k = 0; k < m.cells(); ++k) {
      for (int j = 0; j < d; ++j) m.at(j, k) = initial.rho(k) * initial.u.at(j, k);
    }
    for (int j = 0; j < d; ++j) s.m_lhs0[j] = pairing(m, phi, t0_, j);
    if (phi.nonnegative) {
      CellField rs(grid_);
      for (Index k = 0; k < rs.cells(); ++k) {
        rs(k) = initial.rho(k) * entropy(initial.rho(k), initial.theta(k), params_.gas);
      }
      s.s_lhs0 = pairing(rs, phi, t0_, 0);
    }
  }
}

double ConsistencyAccumulator::pairing(const CellField& f, const TestFunction& phi, double t,
                                       int comp) const {
  const std::vector<double> ints = cell_integrals(*grid_, phi, t);
  double s = 0.0;
  for (Index k = 0; k < f.cells(); ++k) s += f.at(comp, k) * ints[k];
  return s;
}

void ConsistencyAccumulator::add(const State& previous, const State& current) {
  const Grid& g = *grid_;
  require_same_grid(g, current.grid());
  const int d = g.dim();
  const Index n = g.num_cells();
  const double t0 = t_;
  const double t1 = t_ + params_.dt;
  const double h = g.h();
  (void)previous;

  TensorCalculus tc = tensor_calculus(current.u);
  CellField stress = viscous_stress(tc.gradient, params_.mu, params_.lambda);

  std::vector<double> rho_s;
  for (std::size_t i = 0; i < tests_.size(); ++i) {
    const TestFunction& phi = tests_[i];
    Sums& sum = sums_[i];
    const std::vector<double> c0 = cell_integrals(g, phi, t0);
    const std::vector<double> c1 = cell_integrals(g, phi, t1);
    const std::vector<double> grad = cell_gradient_integrals(g, phi, t0, t1);

    for (Index k = 0; k < n; ++k) {
      const double rho = current.rho(k);
      const double dphi = c1[k] - c0[k];
      double u_grad = 0.0;
      for (int a = 0; a < d; ++a) u_grad += current.u.at(a, k) * grad[a * n + k];
      sum.rho_rhs += rho * dphi + rho * u_grad;
      const double p = pressure(rho, current.theta(k));
      for (int j = 0; j < d; ++j) {
        const double m = rho * current.u.at(j, k);
        double stress_grad = 0.0;
        for (int a = 0; a < d; ++a) stress_grad += stress.at(j * d + a, k) * grad[a * n + k];
        sum.m_rhs[j] += m * dphi + m * u_grad + p * grad[j * n + k] - stress_grad;
      }
    }

    if (!phi.nonnegative) continue;
    if (rho_s.empty()) {
      rho_s.resize(n);
      for (Index k = 0; k < n; ++k) {
        rho_s[k] = current.rho(k) * entropy(current.rho(k), current.theta(k), params_.gas);
      }
    }
    const GaussLegendre& tr = time_rule();
    double acc = 0.0;
    for (Index k = 0; k < n; ++k) {
      double u_grad = 0.0;
      for (int a = 0; a < d; ++a) u_grad += current.u.at(a, k) * grad[a * n + k];
      acc += rho_s[k] * ((c1[k] - c0[k]) + u_grad);
    }
    // viscous production, cell integrals of phi over the slab
    const Point width{h, h, d == 3 ? h : 0.0};
    for (int q = 0; q < tr.size(); ++q) {
      const double t = t0 + (t1 - t0) * tr.nodes()[q];
      const double wt = (t1 - t0) * tr.weights()[q];
      for (Index k = 0; k < n; ++k) {
        double v = 0.0;
        box_quadrature(cell_corner(g, k), width, d, space_rule(), [&](const Point& x, double w) {
          const double val = phi.value(t, x);
          if (val < 0.0) {
            throw std::invalid_argument("entropy test function '" + phi.name +
                                        "' must be nonnegative");
          }
          v += w * val;
        });
        double work = 0.0;
        for (int c = 0; c < d * d; ++c) work += stress.at(c, k) * tc.gradient.at(c, k);
        acc += wt * v * work / current.theta(k);

        // heat-flux terms on the two half dual cells adjacent to the upper
        // face of K along each axis
        for (int a = 0; a < d; ++a) {
          const Index o = g.plus(a, k);
          const double th_in = current.theta(k), th_out = current.theta(o);
          const double grad_e = (th_out - th_in) / h;
          Point lo_in = cell_corner(g, k);
          lo_in[a] += 0.5 * h;
          Point lo_out = lo_in;
          lo_out[a] += 0.5 * h;
          Point half = width;
          half[a] = 0.5 * h;
          double phi_in = 0.0, dphi_in = 0.0, phi_out = 0.0, dphi_out = 0.0;
          box_quadrature(lo_in, half, d, space_rule(), [&](const Point& x, double w) {
            phi_in += w * phi.value(t, x);
            dphi_in += w * phi.gradient(t, x)[a];
          });
          box_quadrature(lo_out, half, d, space_rule(), [&](const Point& x, double w) {
            phi_out += w * phi.value(t, x);
            dphi_out += w * phi.gradient(t, x)[a];
          });
          const double kap = params_.kappa;
          acc += wt * (kap * grad_e * grad_e / (th_in * th_out) * (phi_in + phi_out) -
                       kap * grad_e * (dphi_in / th_in + dphi_out / th_out));
        }
      }
    }
    sum.s_rhs += acc;
  }
  t_ = t1;
  last_ = current;
}

ConsistencyReport ConsistencyAccumulator::report() const {
  const int d = grid_->dim();
  ConsistencyReport rep;
  rep.h = grid_->h();
  rep.dt = params_.dt;
  rep.eps = params_.eps;
  rep.tau = t_ - t0_;
  CellField m(grid_, d);
  for (Index k = 0; k < m.cells(); ++k) {
    for (int j = 0; j < d; ++j) m.at(j, k) = last_.rho(k) * last_.u.at(j, k);
  }
  for (std::size_t i = 0; i < tests_.size(); ++i) {
    const TestFunction& phi = tests_[i];
    const Sums& s = sums_[i];
    ConsistencyEntry e;
    e.name = phi.name;
    e.e_rho = pairing(last_.rho, phi, t_, 0) - s.rho_lhs0 - s.rho_rhs;
    e.e_m.resize(d);
    double norm2 = 0.0;
    for (int j = 0; j < d; ++j) {
      e.e_m[j] = pairing(m, phi, t_, j) - s.m_lhs0[j] - s.m_rhs[j];
      norm2 += e.e_m[j] * e.e_m[j];
    }
    e.e_m_norm = std::sqrt(norm2);
    if (phi.nonnegative) {
      CellField rs(grid_);
      for (Index k = 0; k < rs.cells(); ++k) {
        rs(k) = last_.rho(k) * entropy(last_.rho(k), last_.theta(k), params_.gas);
      }
      e.has_entropy = true;
      e.e_s = pairing(rs, phi, t_, 0) - s.s_lhs0 - s.s_rhs;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

ConsistencyReport consistency_residuals(std::span<const State> history,
                                        std::vector<TestFunction> tests,
                                        const SchemeParams& params) {
  if (history.empty()) throw std::invalid_argument("empty history");
  ConsistencyAccumulator acc(std::move(tests), params, history.front());
  for (std::size_t k = 1; k < history.size(); ++k) acc.add(history[k - 1], history[k]);
  return acc.report();
}

std::vector<TestFunction> builtin_test_functions(int dim) {
  constexpr double tp = 2.0 * std::numbers::pi;
  std::vector<TestFunction> v;
  v.push_back({"one", [](double, const Point&) { return 1.0; },
               [](double, const Point&) { return Point{0.0, 0.0, 0.0}; }, true});
  v.push_back({"sin_x1",
               [](double, const Point& x) { return std::sin(tp * x[0]); },
               [](double, const Point& x) { return Point{tp * std::cos(tp * x[0]), 0.0, 0.0}; },
               false});
  v.push_back({"cos_x2",
               [](double, const Point& x) { return std::cos(tp * x[1]); },
               [](double, const Point& x) { return Point{0.0, -tp * std::sin(tp * x[1]), 0.0}; },
               false});
  // wavenumber 2 product with a slow time modulation
  v.push_back({"sin_x1_cos_2x2_t",
               [](double t, const Point& x) {
                 return (1.0 + t) * std::sin(tp * x[0]) * std::cos(2.0 * tp * x[1]);
               },
               [](double t, const Point& x) {
                 const double a = 1.0 + t;
                 return Point{a * tp * std::cos(tp * x[0]) * std::cos(2.0 * tp * x[1]),
                              -a * 2.0 * tp * std::sin(tp * x[0]) * std::sin(2.0 * tp * x[1]),
                              0.0};
               },
               false});
  v.push_back({"pos_sin_x1",
               [](double, const Point& x) { return 1.0 + 0.5 * std::sin(tp * x[0]); },
               [](double, const Point& x) {
                 return Point{0.5 * tp * std::cos(tp * x[0]), 0.0, 0.0};
               },
               true});
  v.push_back({"pos_cos_2x1_cos_x2",
               [](double, const Point& x) {
                 return 1.0 + 0.5 * std::cos(2.0 * tp * x[0]) * std::cos(tp * x[1]);
               },
               [](double, const Point& x) {
                 return Point{-tp * std::sin(2.0 * tp * x[0]) * std::cos(tp * x[1]),
                              -0.5 * tp * std::cos(2.0 * tp * x[0]) * std::sin(tp * x[1]),
                              0.0};
               },
               true});
  if (dim == 3) {
    v.push_back({"cos_x3",
                 [](double, const Point& x) { return std::cos(tp * x[2]); },
                 [](double, const Point& x) {
                   return Point{0.0, 0.0, -tp * std::sin(tp * x[2])};
                 },
                 false});
  }
  return v;
}

}  // namespace fvnsf
