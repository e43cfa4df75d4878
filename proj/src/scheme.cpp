#include "fvnsf/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "fvnsf/linear_solver.hpp"
#include "fvnsf/operators.hpp"
#include "fvnsf/parallel.hpp"

namespace fvnsf {

const char* to_string(SolverError::Kind kind) {
  switch (kind) {
    case SolverError::Kind::NoConvergence:
      return "NoConvergence";
    case SolverError::Kind::PositivityLoss:
      return "PositivityLoss";
    case SolverError::Kind::NonFinite:
      return "NonFinite";
  }
  return "SolverError";
}

void SchemeParams::validate() const {
  try {
    gas.validate();
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("gamma must be > 1");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  if (!(eps > -1.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (-1, 1)");
  if (alpha && !(*alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be > 0");
  if (picard_max < 1) throw std::invalid_argument("picard_max must be >= 1");
  if (!(linear_tol > 0.0)) throw std::invalid_argument("linear_tol must be > 0");
  if (linear_max < 1) throw std::invalid_argument("linear_max must be >= 1");
}

State initial_state(const ScalarFunction& rho0, const VectorFunction& u0,
                    const ScalarFunction& theta0, const GridPtr& grid,
                    const SchemeParams& params) {
  params.validate();
  if (static_cast<int>(u0.size()) != grid->dim()) {
    throw std::invalid_argument("initial velocity needs one sampler per axis");
  }
  State s{project_Q(rho0, grid), project_Q(u0, grid), project_Q(theta0, grid), 0.0};
  if (!(min_value(s.rho) > 0.0)) throw std::invalid_argument("initial density must be positive");
  if (!(min_value(s.theta) > 0.0)) {
    throw std::invalid_argument("initial temperature must be positive");
  }
  return s;
}

namespace {

// S = 2 mu D(u) + lambda div(u) I from a row-major gradient.
void stress_from_gradient(const CellField& grad, double mu, double lambda, CellField& stress) {
  const int d = grad.grid().dim();
  const Index n = grad.cells();
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      auto s = stress.component(j * d + i);
      auto a = grad.component(j * d + i);
      auto b = grad.component(i * d + j);
      for (Index k = 0; k < n; ++k) s[k] = mu * (a[k] + b[k]);
    }
  }
  if (lambda != 0.0) {
    for (int j = 0; j < d; ++j) {
      auto s = stress.component(j * d + j);
      for (int l = 0; l < d; ++l) {
        auto g = grad.component(l * d + l);
        for (Index k = 0; k < n; ++k) s[k] += lambda * g[k];
      }
    }
  }
}

double contract(const CellField& a, const CellField& b, Index k) {
  double s = 0.0;
  for (int c = 0; c < a.components(); ++c) s += a.at(c, k) * b.at(c, k);
  return s;
}

}  // namespace

Residual assemble_residual(const State& candidate, const State& previous,
                           const SchemeParams& params) {
  const Grid& g = candidate.grid();
  require_same_grid(g, previous.grid());
  const int d = g.dim();
  const Index n = g.num_cells();
  const double vol = g.cell_volume();
  const double cv = params.gas.cv();
  const double inv_dt = 1.0 / params.dt;
  const FluxParams fp = params.flux(g);
  const GridPtr& grid = candidate.grid_ptr();

  CellField pressure_field(grid);
  CellField momentum(grid, d);
  CellField heat(grid);
  for (Index k = 0; k < n; ++k) {
    pressure_field(k) = pressure(candidate.rho(k), candidate.theta(k));
    heat(k) = candidate.rho(k) * candidate.theta(k);
    for (int j = 0; j < d; ++j) momentum.at(j, k) = candidate.rho(k) * candidate.u.at(j, k);
  }

  TensorCalculus tc = tensor_calculus(candidate.u);
  CellField stress(grid, d * d);
  stress_from_gradient(tc.gradient, params.mu, params.lambda, stress);
  CellField stress_div = div_h(stress);
  CellField grad_p = grad_h(pressure_field);
  CellField lap_theta = laplace_h(candidate.theta);
  CellField lap_u;
  if (params.alpha) lap_u = laplace_h(candidate.u);
  const double h_alpha = params.alpha ? std::pow(g.h(), *params.alpha) : 0.0;

  CellField mass_flux = flux_divergence(candidate.rho, candidate.u, fp);
  CellField momentum_flux = flux_divergence(momentum, candidate.u, fp);
  CellField heat_flux = flux_divergence(heat, candidate.u, fp);

  Residual r{CellField(grid), CellField(grid, d), CellField(grid)};
  for (Index k = 0; k < n; ++k) {
    r.continuity(k) = vol * (candidate.rho(k) - previous.rho(k)) * inv_dt + mass_flux(k);
    for (int j = 0; j < d; ++j) {
      const double m_prev = previous.rho(k) * previous.u.at(j, k);
      double v = vol * (momentum.at(j, k) - m_prev) * inv_dt + momentum_flux.at(j, k) +
                 vol * (grad_p.at(j, k) - stress_div.at(j, k));
      if (params.alpha) v -= h_alpha * vol * lap_u.at(j, k);
      r.momentum.at(j, k) = v;
    }
    // (S - p I) : nabla_h u = S : nabla_h u - p div_h u
    const double work = contract(stress, tc.gradient, k) - pressure_field(k) * tc.divergence(k);
    r.temperature(k) = cv * vol * (heat(k) - previous.rho(k) * previous.theta(k)) * inv_dt +
                       cv * heat_flux(k) - params.kappa * vol * lap_theta(k) - vol * work;
  }

  for (const CellField* f : {&r.continuity, &r.momentum, &r.temperature}) {
    for (double v : f->values()) {
      if (!std::isfinite(v)) {
        throw SolverError(SolverError::Kind::NonFinite, "non-finite residual (blow-up)");
      }
    }
  }
  return r;
}

namespace {

/// Face coefficients of the diffusive upwind flux for a frozen velocity:
/// |sigma| F = c_in r_in - c_out r_out.
struct Transport {
  std::vector<double> c_in;
  std::vector<double> c_out;
  std::vector<double> diag;
};

Transport build_transport(const Grid& g, const CellField& u, double h_eps) {
  const Index n = g.num_cells();
  const double area = g.face_area();
  Transport t;
  t.c_in.resize(g.num_faces());
  t.c_out.resize(g.num_faces());
  t.diag.assign(n, 0.0);
  for (int a = 0; a < g.dim(); ++a) {
    auto ua = u.component(a);
    for (Index k = 0; k < n; ++k) {
      const Index out = g.plus(a, k);
      const Index id = g.face_id(a, k);
      const double s = 0.5 * (ua[k] + ua[out]);
      t.c_in[id] = area * (std::max(s, 0.0) + h_eps);
      t.c_out[id] = area * (std::max(-s, 0.0) + h_eps);
      t.diag[k] += t.c_in[id];
      t.diag[out] += t.c_out[id];
    }
  }
  return t;
}

// out += scale * transport(r)
void add_transport(const Grid& g, const Transport& t, const double* r, double* out,
                   double scale) {
  const Index n = g.num_cells();
  for (int a = 0; a < g.dim(); ++a) {
    for (Index k = 0; k < n; ++k) {
      const Index o = g.plus(a, k);
      const Index id = g.face_id(a, k);
      const double flux = scale * (t.c_in[id] * r[k] - t.c_out[id] * r[o]);
      out[k] += flux;
      out[o] -= flux;
    }
  }
}

// out += scale * Laplacian(v)
void add_laplacian(const Grid& g, const double* v, double* out, double scale) {
  const Index n = g.num_cells();
  const double c = scale / (g.h() * g.h());
  const int d = g.dim();
  parallel_for(n, [&](Index b, Index e) {
    for (Index k = b; k < e; ++k) {
      double acc = 0.0;
      for (int a = 0; a < d; ++a) acc += v[g.plus(a, k)] + v[g.minus(a, k)] - 2.0 * v[k];
      out[k] += c * acc;
    }
  });
}

class StepSolver {
 public:
  StepSolver(const State& previous, const SchemeParams& params)
      : prev_(previous),
        p_(params),
        g_(previous.grid()),
        d_(g_.dim()),
        n_(g_.num_cells()),
        vol_(g_.cell_volume()),
        h_eps_(params.flux(g_).diffusion()),
        h_alpha_(params.alpha ? std::pow(g_.h(), *params.alpha) : 0.0),
        grad_(d_ * d_ * n_),
        stress_(d_ * d_ * n_),
        vel_(d_ * n_),
        work_(n_) {}

  std::pair<State, StepStats> solve() {
    State x = prev_;
    StepStats stats;
    const Index total = n_ * static_cast<Index>(d_ + 2);
    std::vector<double> old(total);

    for (int it = 1; it <= p_.picard_max; ++it) {
      pack(x, old);

      Transport frozen = build_transport(g_, x.u, h_eps_);
      solve_continuity(frozen, x);
      solve_momentum(frozen, x);
      Transport updated = build_transport(g_, x.u, h_eps_);
      solve_temperature(updated, x);

      double diff2 = 0.0;
      double norm2 = 0.0;
      Index pos = 0;
      for (const CellField* f : {&x.rho, &x.u, &x.theta}) {
        for (double v : f->values()) {
          if (!std::isfinite(v)) {
            throw SolverError(SolverError::Kind::NonFinite,
                              "non-finite iterate in Picard sweep " + std::to_string(it));
          }
          const double dv = v - old[pos++];
          diff2 += dv * dv;
          norm2 += v * v;
        }
      }
      stats.picard_iterations = it;
      stats.final_increment = norm2 > 0.0 ? std::sqrt(diff2 / norm2) : std::sqrt(diff2);
      if (stats.final_increment <= p_.picard_tol) {
        stats.rho_min = min_value(x.rho);
        stats.theta_min = min_value(x.theta);
        if (!(stats.rho_min > 0.0) || !(stats.theta_min > 0.0)) {
          std::ostringstream msg;
          msg << "converged state lost positivity (min rho " << stats.rho_min << ", min theta "
              << stats.theta_min << ")";
          throw SolverError(SolverError::Kind::PositivityLoss, msg.str());
        }
        x.t = prev_.t + p_.dt;
        return {std::move(x), stats};
      }
    }
    std::ostringstream msg;
    msg << "Picard iteration did not converge in " << p_.picard_max
        << " sweeps (last increment " << stats.final_increment << "); reduce dt";
    throw SolverError(SolverError::Kind::NoConvergence, msg.str());
  }

 private:
  void pack(const State& x, std::vector<double>& out) const {
    Index pos = 0;
    for (const CellField* f : {&x.rho, &x.u, &x.theta}) {
      for (double v : f->values()) out[pos++] = v;
    }
  }

  // continuity with frozen velocity, unknown rho
  void solve_continuity(const Transport& t, State& x) {
    const double a = vol_ / p_.dt;
    std::vector<double> rhs(n_), inv_diag(n_);
    for (Index k = 0; k < n_; ++k) {
      rhs[k] = a * prev_.rho(k);
      inv_diag[k] = 1.0 / (a + t.diag[k]);
    }
    auto apply = [&](std::span<const double> in, std::span<double> out) {
      for (Index k = 0; k < n_; ++k) out[k] = a * in[k];
      add_transport(g_, t, in.data(), out.data(), 1.0);
    };
    bicgstab(apply, inv_diag, rhs, x.rho.values(), p_.linear_tol, p_.linear_max);
  }

  // momentum in m = rho u with updated density, frozen convective velocity
  // and frozen pressure rho * theta_old
  void solve_momentum(const Transport& t, State& x) {
    const double a = vol_ / p_.dt;
    const Index len = n_ * static_cast<Index>(d_);
    std::vector<double> rhs(len), inv_diag(len), m(len);

    CellField p_field(x.grid_ptr());
    for (Index k = 0; k < n_; ++k) p_field(k) = pressure(x.rho(k), x.theta(k));
    CellField grad_p = grad_h(p_field);

    const double alpha_diag = h_alpha_ * vol_ * 2.0 * d_ / (g_.h() * g_.h());
    for (int j = 0; j < d_; ++j) {
      for (Index k = 0; k < n_; ++k) {
        const Index i = j * n_ + k;
        rhs[i] = a * prev_.rho(k) * prev_.u.at(j, k) - vol_ * grad_p.at(j, k);
        inv_diag[i] = 1.0 / (a + t.diag[k] + alpha_diag / x.rho(k));
        m[i] = x.rho(k) * x.u.at(j, k);
      }
    }
    const CellField& rho = x.rho;
    auto apply = [&](std::span<const double> in, std::span<double> out) {
      for (int j = 0; j < d_; ++j) {
        for (Index k = 0; k < n_; ++k) {
          const Index i = j * n_ + k;
          vel_[i] = in[i] / rho(k);
          out[i] = a * in[i];
        }
        add_transport(g_, t, in.data() + j * n_, out.data() + j * n_, 1.0);
        if (h_alpha_ != 0.0) {
          add_laplacian(g_, vel_.data() + j * n_, out.data() + j * n_, -h_alpha_ * vol_);
        }
      }
      add_viscous(vel_.data(), out.data(), -vol_);
    };
    bicgstab(apply, inv_diag, rhs, m, p_.linear_tol, p_.linear_max);
    for (int j = 0; j < d_; ++j) {
      for (Index k = 0; k < n_; ++k) x.u.at(j, k) = m[j * n_ + k] / x.rho(k);
    }
  }

  // temperature in q = rho theta with updated rho and u; p = q is implicit
  void solve_temperature(const Transport& t, State& x) {
    const double cv = p_.gas.cv();
    const double a = cv * vol_ / p_.dt;
    TensorCalculus tc = tensor_calculus(x.u);
    CellField stress(x.grid_ptr(), d_ * d_);
    stress_from_gradient(tc.gradient, p_.mu, p_.lambda, stress);

    std::vector<double> rhs(n_), inv_diag(n_), q(n_), div(n_);
    const double lap_diag = p_.kappa * vol_ * 2.0 * d_ / (g_.h() * g_.h());
    for (Index k = 0; k < n_; ++k) {
      div[k] = tc.divergence(k);
      rhs[k] = a * prev_.rho(k) * prev_.theta(k) + vol_ * contract(stress, tc.gradient, k);
      const double diag = a + cv * t.diag[k] + lap_diag / x.rho(k) + vol_ * div[k];
      inv_diag[k] = diag > 0.0 ? 1.0 / diag : 1.0 / a;
      q[k] = x.rho(k) * x.theta(k);
    }
    const CellField& rho = x.rho;
    auto apply = [&](std::span<const double> in, std::span<double> out) {
      for (Index k = 0; k < n_; ++k) {
        work_[k] = in[k] / rho(k);
        out[k] = (a + vol_ * div[k]) * in[k];
      }
      add_transport(g_, t, in.data(), out.data(), cv);
      add_laplacian(g_, work_.data(), out.data(), -p_.kappa * vol_);
    };
    bicgstab(apply, inv_diag, rhs, q, p_.linear_tol, p_.linear_max);
    for (Index k = 0; k < n_; ++k) x.theta(k) = q[k] / x.rho(k);
  }

  // out += scale * div_h S(u), u stored component-major in `u`
  void add_viscous(const double* u, double* out, double scale) {
    const double c = 0.5 / g_.h();
    const Index n = n_;
    const int d = d_;
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        double* gji = grad_.data() + (j * d + i) * n;
        const double* uj = u + j * n;
        parallel_for(n, [&](Index b, Index e) {
          for (Index k = b; k < e; ++k) gji[k] = c * (uj[g_.plus(i, k)] - uj[g_.minus(i, k)]);
        });
      }
    }
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        double* s = stress_.data() + (j * d + i) * n;
        const double* a = grad_.data() + (j * d + i) * n;
        const double* b = grad_.data() + (i * d + j) * n;
        for (Index k = 0; k < n; ++k) s[k] = p_.mu * (a[k] + b[k]);
        if (i == j && p_.lambda != 0.0) {
          for (int l = 0; l < d; ++l) {
            const double* gl = grad_.data() + (l * d + l) * n;
            for (Index k = 0; k < n; ++k) s[k] += p_.lambda * gl[k];
          }
        }
      }
    }
    for (int j = 0; j < d; ++j) {
      double* oj = out + j * n;
      for (int i = 0; i < d; ++i) {
        const double* s = stress_.data() + (j * d + i) * n;
        const double f = scale * c;
        parallel_for(n, [&](Index b, Index e) {
          for (Index k = b; k < e; ++k) oj[k] += f * (s[g_.plus(i, k)] - s[g_.minus(i, k)]);
        });
      }
    }
  }

  const State& prev_;
  const SchemeParams& p_;
  const Grid& g_;
  const int d_;
  const Index n_;
  const double vol_;
  const double h_eps_;
  const double h_alpha_;
  std::vector<double> grad_;
  std::vector<double> stress_;
  std::vector<double> vel_;
  std::vector<double> work_;
};

}  // namespace

std::pair<State, StepStats> step(const State& previous, const SchemeParams& params) {
  params.validate();
  StepSolver solver(previous, params);
  return solver.solve();
}

int step_count(double t_end, double dt) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  const double ratio = t_end / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("t_end must be an integer multiple of dt");
  }
  return static_cast<int>(steps);
}

RunResult run(const State& initial, const SchemeParams& params, double t_end,
              std::span<const StepObserver> observers) {
  params.validate();
  const int steps = step_count(t_end, params.dt);

  double u_max = 0.0;
  for (double v : initial.u.values()) u_max = std::max(u_max, std::abs(v));
  if (u_max > 0.0 && params.dt > initial.grid().h() / u_max) {
    std::clog << "warning: dt = " << params.dt << " exceeds h/max|u| = "
              << initial.grid().h() / u_max << "; Picard convergence may degrade\n";
  }

  RunResult result{initial, {}};
  result.history.reserve(steps);
  for (int k = 1; k <= steps; ++k) {
    try {
      auto [next, stats] = step(result.final_state, params);
      next.t = initial.t + k * params.dt;
      for (const auto& obs : observers) obs(k, result.final_state, next, stats);
      result.history.push_back(stats);
      result.final_state = std::move(next);
    } catch (const SolverError& e) {
      throw SolverError(e.kind(), "step " + std::to_string(k) + ": " + e.what(), k);
    }
  }
  return result;
}

}  // namespace fvnsf
