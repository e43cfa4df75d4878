#include "fvnsf/convergence.hpp"

#include <cmath>
#include <stdexcept>

#include "fvnsf/operators.hpp"

namespace fvnsf {

CellField restrict_field(const CellField& fine, const GridPtr& coarse) {
  const Grid& f = fine.grid();
  if (f.dim() != coarse->dim()) throw std::invalid_argument("restrict: dimension mismatch");
  if (f.n() % coarse->n() != 0) {
    throw std::invalid_argument("restrict: fine/coarse ratio must be an integer");
  }
  const int m = f.n() / coarse->n();
  const int d = f.dim();
  CellField out(coarse, fine.components());
  const double w = 1.0 / std::pow(static_cast<double>(m), d);
  for (Index k = 0; k < f.num_cells(); ++k) {
    auto c = f.coords(k);
    for (int a = 0; a < d; ++a) c[a] /= m;
    const Index target = coarse->cell_at(c);
    for (int comp = 0; comp < fine.components(); ++comp) {
      out.at(comp, target) += w * fine.at(comp, k);
    }
  }
  return out;
}

State restrict_state(const State& fine, const GridPtr& coarse) {
  return State{restrict_field(fine.rho, coarse), restrict_field(fine.u, coarse),
               restrict_field(fine.theta, coarse), fine.t};
}

ErrorAccumulator::ErrorAccumulator(const SchemeParams& params, const GasParams& gas)
    : params_(params), gas_(gas) {}

void ErrorAccumulator::add(const State& numerical, const State& reference, double dt_weight) {
  require_same_grid(numerical.grid(), reference.grid());
  if (std::abs(numerical.t - reference.t) > 1e-12 * std::max(1.0, std::abs(numerical.t))) {
    throw std::invalid_argument("error_norms: time stamps differ");
  }
  rho_ = std::max(rho_, l2_norm(numerical.rho - reference.rho));
  u_ = std::max(u_, l2_norm(numerical.u - reference.u));
  theta_ = std::max(theta_, l2_norm(numerical.theta - reference.theta));
  relenergy_ = std::max(relenergy_, relative_energy(numerical, reference, gas_));
  if (dt_weight > 0.0) {
    const double gu = l2_norm(grad_h(numerical.u) - grad_h(reference.u));
    const FaceField ga = grad_E(numerical.theta);
    const FaceField gb = grad_E(reference.theta);
    double s = 0.0;
    for (Index i = 0; i < ga.faces(); ++i) s += (ga(i) - gb(i)) * (ga(i) - gb(i));
    const double gt2 = s * numerical.grid().cell_volume();
    gradu2_ += dt_weight * gu * gu;
    gradtheta2_ += dt_weight * gt2;
  }
}

ErrorReport ErrorAccumulator::report(double h) const {
  ErrorReport r;
  r.err_rho = rho_;
  r.err_u = u_;
  r.err_theta = theta_;
  r.err_gradu = std::sqrt(gradu2_);
  r.err_gradtheta = std::sqrt(gradtheta2_);
  r.sup_relenergy = relenergy_;
  r.h = h;
  r.dt = params_.dt;
  r.eps = params_.eps;
  r.alpha = params_.alpha;
  return r;
}

ErrorReport error_norms(std::span<const State> history, std::span<const State> reference,
                        const SchemeParams& params) {
  if (history.size() != reference.size() || history.empty()) {
    throw std::invalid_argument("error_norms: history and reference differ in length");
  }
  ErrorAccumulator acc(params, params.gas);
  for (std::size_t k = 0; k < history.size(); ++k) {
    acc.add(history[k], reference[k], k == 0 ? 0.0 : params.dt);
  }
  return acc.report(history.front().grid().h());
}

std::vector<std::optional<double>> eoc(std::span<const double> errors) {
  std::vector<std::optional<double>> rates;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double a = errors[k], b = errors[k + 1];
    if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)) {
      rates.emplace_back(std::log2(a / b));
    } else {
      rates.emplace_back(std::nullopt);
    }
  }
  return rates;
}

std::optional<double> fitted_order(std::span<const double> h, std::span<const double> e) {
  if (h.size() != e.size() || h.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(e[i] > 0.0)) return std::nullopt;
    mx += std::log(h[i]) / n;
    my += std::log(e[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(e[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

namespace {

std::string level_tag(int n) { return "level N=" + std::to_string(n) + ": "; }

}  // namespace

StudyTable run_study(const StudyConfig& config) {
  if (config.levels.empty()) throw std::invalid_argument("study needs at least one level");
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    const int n = config.levels[i];
    if (i > 0 && n != 2 * config.levels[i - 1]) {
      throw std::invalid_argument("study levels must form a doubling chain");
    }
    if (config.reference <= n || config.reference % n != 0) {
      throw std::invalid_argument("reference must be strictly finer than, and a multiple of, every level");
    }
  }
  if (!(config.dt_factor > 0.0)) throw std::invalid_argument("dt_factor must be > 0");

  const std::size_t nl = config.levels.size();
  std::vector<GridPtr> grids;
  for (int n : config.levels) grids.push_back(build_grid(config.dim, n));

  // reference trajectory restricted to every level at that level's stamps
  GridPtr ref_grid = build_grid(config.dim, config.reference);
  SchemeParams ref_params = config.params;
  ref_params.dt = config.dt_factor * ref_grid->h();
  const State ref0 = initial_state(config.initial.rho, config.initial.u, config.initial.theta,
                                   ref_grid, ref_params);
  std::vector<std::vector<State>> restricted(nl);
  std::vector<int> stride(nl);
  for (std::size_t l = 0; l < nl; ++l) {
    stride[l] = config.reference / config.levels[l];
    restricted[l].push_back(restrict_state(ref0, grids[l]));
  }
  StudyTable table;
  table.reference_window.include(ref0);
  StepObserver ref_observer = [&](int k, const State&, const State& cur, const StepStats&) {
    table.reference_window.include(cur);
    for (std::size_t l = 0; l < nl; ++l) {
      if (k % stride[l] == 0) restricted[l].push_back(restrict_state(cur, grids[l]));
    }
  };
  try {
    run(ref0, ref_params, config.t_end, std::span<const StepObserver>(&ref_observer, 1));
  } catch (const SolverError& e) {
    throw SolverError(e.kind(), level_tag(config.reference) + e.what(), e.step());
  }

  for (std::size_t l = 0; l < nl; ++l) {
    StudyRow row;
    row.n = config.levels[l];
    row.h = grids[l]->h();
    SchemeParams p = config.params;
    p.dt = config.dt_factor * row.h;
    row.dt = p.dt;
    const State s0 =
        initial_state(config.initial.rho, config.initial.u, config.initial.theta, grids[l], p);
    ErrorAccumulator acc(p, p.gas);
    acc.add(s0, restricted[l][0], 0.0);
    row.window.include(s0);
    StepObserver obs = [&](int k, const State& prev, const State& cur, const StepStats& st) {
      if (static_cast<std::size_t>(k) >= restricted[l].size()) {
        throw std::logic_error("reference stamps exhausted");
      }
      acc.add(cur, restricted[l][k], p.dt);
      row.window.include(cur);
      row.records.push_back(record(prev, cur, p, st, k));
      if (config.level_observer) config.level_observer(row.n, k, prev, cur);
    };
    try {
      run(s0, p, config.t_end, std::span<const StepObserver>(&obs, 1));
    } catch (const SolverError& e) {
      throw SolverError(e.kind(), level_tag(row.n) + e.what(), e.step());
    }
    row.errors = acc.report(row.h);
    double sum = 0.0;
    for (const auto& r : row.records) sum += r.diss_alpha;
    row.mean_diss_alpha = row.records.empty() ? 0.0 : sum / row.records.size();
    table.rows.push_back(std::move(row));
  }

  auto column = [&](auto member) {
    std::vector<double> v;
    for (const auto& r : table.rows) v.push_back(r.errors.*member);
    return eoc(v);
  };
  table.rate_rho = column(&ErrorReport::err_rho);
  table.rate_u = column(&ErrorReport::err_u);
  table.rate_theta = column(&ErrorReport::err_theta);
  table.rate_gradu = column(&ErrorReport::err_gradu);
  table.rate_gradtheta = column(&ErrorReport::err_gradtheta);
  return table;
}

}  // namespace fvnsf
