#include "fvnsf/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fvnsf {

GaussLegendre::GaussLegendre(int points) {
  if (points < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one point");
  const int n = points;
  nodes_.resize(n);
  weights_.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? x : p1;
      double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // map [-1,1] -> [0,1]
    nodes_[i] = 0.5 * (1.0 - x);
    weights_[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

const GaussLegendre& projection_rule() {
  static const GaussLegendre rule(kProjectionPoints);
  return rule;
}

double box_mean(const ScalarFunction& f, const Point& lo, const Point& width, int dim,
                const GaussLegendre& rule) {
  const int q = rule.size();
  std::array<int, 3> count{1, 1, 1};
  for (int a = 0; a < dim; ++a) count[a] = width[a] > 0.0 ? q : 1;

  // accumulate deviations from the first sample so constants come back exact
  // (the weights only sum to 1 up to rounding)
  double sum = 0.0;
  double base = 0.0;
  bool first = true;
  Point x{0.0, 0.0, 0.0};
  for (int i = 0; i < count[0]; ++i) {
    double w0 = 1.0;
    x[0] = lo[0];
    if (count[0] > 1) {
      x[0] = lo[0] + width[0] * rule.nodes()[i];
      w0 = rule.weights()[i];
    }
    for (int j = 0; j < count[1]; ++j) {
      double w1 = 1.0;
      x[1] = lo[1];
      if (count[1] > 1) {
        x[1] = lo[1] + width[1] * rule.nodes()[j];
        w1 = rule.weights()[j];
      }
      for (int k = 0; k < count[2]; ++k) {
        double w2 = 1.0;
        x[2] = lo[2];
        if (count[2] > 1) {
          x[2] = lo[2] + width[2] * rule.nodes()[k];
          w2 = rule.weights()[k];
        }
        const double v = f(x);
        if (first) {
          base = v;
          first = false;
        }
        sum += w0 * w1 * w2 * (v - base);
      }
    }
  }
  return base + sum;
}

}  // namespace fvnsf
