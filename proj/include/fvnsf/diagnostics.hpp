#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fvnsf/scheme.hpp"

namespace fvnsf {

struct DiagnosticsRecord {
  int step = 0;
  double t = 0.0;
  double mass = 0.0;
  double e_kin = 0.0;
  double e_int = 0.0;
  double e_tot = 0.0;
  // dissipation terms of the discrete energy balance
  double diss_eps = 0.0;    // h^eps sum |sigma| <rho> |[[u]]|^2
  double diss_dt = 0.0;     // dt/2 int rho_prev |D_t u|^2
  double diss_up = 0.0;     // 1/2 sum |sigma| rho^up |<u>.n| |[[u]]|^2
  double diss_alpha = 0.0;  // h^alpha int |grad_E u|^2
  double energy_rate = 0.0;  // D_t of the total energy
  double energy_residual = 0.0;
  // entropy production Pi = int D_t(rho s) + kappa_term - viscous_term
  double entropy_prod = 0.0;
  double entropy_kappa = 0.0;    // sum |sigma| kappa/h [[theta]] [[1/theta]] (<= 0)
  double entropy_viscous = 0.0;  // int S : grad_h u / theta (>= 0)
  double rho_min = 0.0, rho_max = 0.0;
  double theta_min = 0.0, theta_max = 0.0;
  double s_min = 0.0, s_max = 0.0;
  double p_min = 0.0, p_max = 0.0;
  int picard_iters = 0;
  double picard_increment = 0.0;
};

double total_mass(const State& s);
double kinetic_energy(const State& s);
double internal_energy(const State& s, const GasParams& gas);

/// Balance terms between two consecutive levels (current = step of previous).
DiagnosticsRecord record(const State& previous, const State& current, const SchemeParams& params,
                         const StepStats& stats = {}, int step = 0);

struct HessianMargin {
  double lower = 0.0;  // min over cells of lambda_1 - lambda_lower
  double upper = 0.0;  // min over cells of lambda_upper - lambda_2
  bool ok() const noexcept { return lower > 0.0 && upper > 0.0; }
};

HessianMargin hessian_bounds_check(const State& state, const GasParams& gas);

/// Realized uniform bounds on density and temperature over a run.
struct BoundsWindow {
  double rho_min = 0.0, rho_max = 0.0;
  double theta_min = 0.0, theta_max = 0.0;
  bool empty = true;

  void include(const State& s);
  double pressure_lower() const { return rho_min * theta_min; }
  double pressure_upper() const { return rho_max * theta_max; }
  double entropy_lower(const GasParams& gas) const;
  double entropy_upper(const GasParams& gas) const;
  /// p and s of `s` inside the boxes implied by the window.
  bool contains_derived(const State& s, const GasParams& gas) const;
};

/// Smooth space-time test function with its spatial gradient.
struct TestFunction {
  std::string name;
  std::function<double(double t, const Point& x)> value;
  std::function<Point(double t, const Point& x)> gradient;
  bool nonnegative = false;
};

struct ConsistencyEntry {
  std::string name;
  double e_rho = 0.0;
  std::vector<double> e_m;  // one entry per component (phi = psi e_j)
  double e_m_norm = 0.0;
  bool has_entropy = false;
  double e_s = 0.0;  // signed; >= 0 means the inequality direction holds
};

struct ConsistencyReport {
  double h = 0.0;
  double dt = 0.0;
  double eps = 0.0;
  double tau = 0.0;
  std::vector<ConsistencyEntry> entries;

  double max_e_rho() const;
  double max_e_m() const;
  /// Signed entropy defect of the named test function; throws if absent.
  double entropy_defect(const std::string& name) const;
};

/// Accumulates the weak-formulation defects along a run. Level k of the
/// numerical solution is attached to the interval (t_{k-1}, t_k].
class ConsistencyAccumulator {
 public:
  ConsistencyAccumulator(std::vector<TestFunction> tests, const SchemeParams& params,
                         const State& initial);
  void add(const State& previous, const State& current);
  ConsistencyReport report() const;

 private:
  struct Sums {
    double rho_lhs0 = 0.0, rho_rhs = 0.0;
    std::vector<double> m_lhs0, m_rhs;
    double s_lhs0 = 0.0, s_rhs = 0.0;
  };
  double pairing(const CellField& f, const TestFunction& phi, double t, int comp) const;

  std::vector<TestFunction> tests_;
  SchemeParams params_;
  GridPtr grid_;
  double t0_ = 0.0;
  double t_ = 0.0;
  State last_;
  std::vector<Sums> sums_;
};

/// Defects of the weak formulations for a stored trajectory; history[0] is
/// the initial state. Throws std::invalid_argument if tau is not reached.
ConsistencyReport consistency_residuals(std::span<const State> history,
                                        std::vector<TestFunction> tests,
                                        const SchemeParams& params);

/// phi = 1, trigonometric products up to wavenumber 2 and nonnegative variants.
std::vector<TestFunction> builtin_test_functions(int dim);

}  // namespace fvnsf
