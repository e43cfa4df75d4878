#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fvnsf/flux.hpp"
#include "fvnsf/operators.hpp"

namespace fvnsf {

/// The discrete operators exercised by the property suite. Tests swap single
/// entries for deliberately broken versions to make sure the suite notices.
struct OperatorTable {
  std::function<CellField(const CellField&)> grad_h = fvnsf::grad_h;
  std::function<CellField(const CellField&)> div_h = fvnsf::div_h;
  std::function<FaceField(const CellField&)> grad_E = fvnsf::grad_E;
  std::function<CellField(const FaceField&)> div_E = fvnsf::div_E;
  std::function<CellField(const CellField&)> laplace_h = fvnsf::laplace_h;
  std::function<Traces(const CellField&, const Face&, int)> traces = fvnsf::face_traces;
  std::function<CellField(const CellField&, const CellField&, const FluxParams&)>
      flux_divergence = fvnsf::flux_divergence;
};

struct CheckConfig {
  std::uint64_t seed = 20240611;
  int trials = 100;
  double tolerance = 1e-12;   // relative residual of the exact identities
  int hessian_samples = 100000;
  double min_rate = 0.9;      // projection / interpolation decay
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // worst relative residual (or smallest rate / margin)
  double threshold = 0.0;
  std::string detail;
};

std::vector<PropertyResult> run_property_suite(const CheckConfig& config = {},
                                               const OperatorTable& ops = {});

/// Sup-norm errors sup|phi - Pi_W phi| and sup|grad_E Pi_Q psi - grad psi|
/// sampled over the dual cells, for phi_i = sin(2 pi x_i), psi = sin(2 pi x_1).
struct InterpolationErrors {
  double projection_w = 0.0;
  double gradient_e = 0.0;
};
InterpolationErrors interpolation_errors(int dim, int n, const OperatorTable& ops = {});

}  // namespace fvnsf
