#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fvnsf/diagnostics.hpp"
#include "fvnsf/scheme.hpp"

namespace fvnsf {

/// Exact cell averages of a fine field on a coarse grid (N_fine = m * N_coarse).
CellField restrict_field(const CellField& fine, const GridPtr& coarse);
State restrict_state(const State& fine, const GridPtr& coarse);

struct ErrorReport {
  double err_rho = 0.0;  // L^inf L^2
  double err_u = 0.0;
  double err_theta = 0.0;
  double err_gradu = 0.0;      // L^2 L^2 of grad_h u
  double err_gradtheta = 0.0;  // L^2 L^2 of grad_E theta
  double sup_relenergy = 0.0;
  double h = 0.0;
  double dt = 0.0;
  double eps = 0.0;
  std::optional<double> alpha;
};

/// Streaming form of error_norms: feed matching (numerical, reference) levels.
class ErrorAccumulator {
 public:
  ErrorAccumulator(const SchemeParams& params, const GasParams& gas);
  /// `dt_weight` is the time-step weight of this level in the L^2 time norm.
  void add(const State& numerical, const State& reference, double dt_weight);
  ErrorReport report(double h) const;

 private:
  SchemeParams params_;
  GasParams gas_;
  double rho_ = 0.0, u_ = 0.0, theta_ = 0.0;
  double gradu2_ = 0.0, gradtheta2_ = 0.0;
  double relenergy_ = 0.0;
};

/// history[k] and reference[k] must share time stamps and grid; history[0]
/// is the initial level and carries no weight in the L^2-in-time norms.
ErrorReport error_norms(std::span<const State> history, std::span<const State> reference,
                        const SchemeParams& params);

/// rate_k = log2(e_k / e_{k+1}); nullopt where either error is not positive.
std::vector<std::optional<double>> eoc(std::span<const double> errors);

/// Least-squares slope of log e against log h (NaN-free data required).
std::optional<double> fitted_order(std::span<const double> h, std::span<const double> e);

struct InitialData {
  ScalarFunction rho;
  VectorFunction u;
  ScalarFunction theta;
};

struct StudyConfig {
  int dim = 2;
  std::vector<int> levels{16, 32, 64};
  int reference = 256;
  double t_end = 0.125;
  double dt_factor = 0.5;  // dt = dt_factor * h
  SchemeParams params;     // dt is overwritten per level
  InitialData initial;
  /// Optional hook called after every step of every study level.
  std::function<void(int n, int step, const State& previous, const State& current)>
      level_observer;
};

struct StudyRow {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  ErrorReport errors;
  BoundsWindow window;
  double mean_diss_alpha = 0.0;
  std::vector<DiagnosticsRecord> records;
};

struct StudyTable {
  std::vector<StudyRow> rows;  // decreasing h
  std::vector<std::optional<double>> rate_rho, rate_u, rate_theta;
  std::vector<std::optional<double>> rate_gradu, rate_gradtheta;
  BoundsWindow reference_window;
};

/// Self-convergence study against a finer reference run restricted to each
/// level at shared time stamps.
StudyTable run_study(const StudyConfig& config);

}  // namespace fvnsf
