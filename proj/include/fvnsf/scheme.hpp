#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fvnsf/flux.hpp"
#include "fvnsf/state.hpp"
#include "fvnsf/thermo.hpp"

namespace fvnsf {

struct SchemeParams {
  GasParams gas;
  double mu = 0.1;
  double lambda = 0.0;
  double kappa = 0.01;
  double eps = 0.0;
  /// Exponent of the optional artificial viscosity h^alpha in the momentum
  /// equation; disengaged by default.
  std::optional<double> alpha;
  double dt = 0.01;
  double picard_tol = 1e-10;
  int picard_max = 200;
  double linear_tol = 1e-13;
  int linear_max = 2000;

  FluxParams flux(const Grid& grid) const { return {eps, grid.h()}; }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct StepStats {
  int picard_iterations = 0;
  double final_increment = 0.0;
  double rho_min = 0.0;
  double theta_min = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { NoConvergence, PositivityLoss, NonFinite };

  SolverError(Kind kind, const std::string& what, int step = -1)
      : std::runtime_error(what), kind_(kind), step_(step) {}

  Kind kind() const noexcept { return kind_; }
  /// 1-based time step index, -1 when raised outside run().
  int step() const noexcept { return step_; }

 private:
  Kind kind_;
  int step_;
};

const char* to_string(SolverError::Kind kind);

using VectorFunction = std::vector<ScalarFunction>;

/// (Pi_Q rho0, Pi_Q u0, Pi_Q theta0); throws std::invalid_argument if a
/// density or temperature cell mean is not positive.
State initial_state(const ScalarFunction& rho0, const VectorFunction& u0,
                    const ScalarFunction& theta0, const GridPtr& grid,
                    const SchemeParams& params);

struct Residual {
  CellField continuity;
  CellField momentum;
  CellField temperature;
};

/// Cell residuals of the backward Euler system with every spatial term taken
/// at `candidate`. All entries are integrated over the cell (units of |K|).
Residual assemble_residual(const State& candidate, const State& previous,
                           const SchemeParams& params);

/// One implicit time step solved by Gauss-Seidel Picard sweeps.
std::pair<State, StepStats> step(const State& previous, const SchemeParams& params);

using StepObserver =
    std::function<void(int step, const State& previous, const State& current, const StepStats&)>;

struct RunResult {
  State final_state;
  std::vector<StepStats> history;
};

/// t_end / dt must be an integer; observers are called after every step.
RunResult run(const State& initial, const SchemeParams& params, double t_end,
              std::span<const StepObserver> observers = {});

/// Number of steps N_T = t_end / dt; throws std::invalid_argument otherwise.
int step_count(double t_end, double dt);

}  // namespace fvnsf
