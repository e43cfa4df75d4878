#include "fvnsf/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "fvnsf/thermo.hpp"

namespace fvnsf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CellField random_field(const GridPtr& g, int comps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CellField f(g, comps);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double face_inner(const FaceField& a, const FaceField& b) { return inner(a, b); }

// phi_i(x) = A_i sin(2 pi k_i.x + c_i) with its exact divergence
struct TrigVector {
  std::vector<ScalarFunction> phi;
  ScalarFunction div;
};

TrigVector random_trig_vector(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> wave(-2, 2);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, kTwoPi);
  struct Mode {
    std::array<int, 3> k{};
    double a = 0.0, c = 0.0;
  };
  auto modes = std::make_shared<std::vector<Mode>>(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) (*modes)[i].k[j] = wave(rng);
    (*modes)[i].a = amp(rng);
    (*modes)[i].c = phase(rng);
  }
  auto arg = [](const Mode& m, const Point& x, int d_) {
    double s = m.c;
    for (int j = 0; j < d_; ++j) s += kTwoPi * m.k[j] * x[j];
    return s;
  };
  TrigVector tv;
  for (int i = 0; i < d; ++i) {
    tv.phi.push_back([modes, i, d, arg](const Point& x) {
      const Mode& m = (*modes)[i];
      return m.a * std::sin(arg(m, x, d));
    });
  }
  tv.div = [modes, d, arg](const Point& x) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const Mode& m = (*modes)[i];
      s += m.a * kTwoPi * m.k[i] * std::cos(arg(m, x, d));
    }
    return s;
  };
  return tv;
}

struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& w) {
    if (!(v <= value)) {  // NaN counts as worst
      value = v;
      where = w;
    }
  }
};

std::string grid_tag(const Grid& g) {
  return std::to_string(g.dim()) + "D N=" + std::to_string(g.n());
}

PropertyResult finish(const std::string& name, const Worst& w, double threshold) {
  PropertyResult r;
  r.name = name;
  r.worst = w.value;
  r.threshold = threshold;
  r.passed = w.value <= threshold;
  r.detail = w.where;
  return r;
}

}  // namespace

InterpolationErrors interpolation_errors(int dim, int n, const OperatorTable& ops) {
  GridPtr g = build_grid(dim, n);
  std::vector<ScalarFunction> phi;
  for (int i = 0; i < dim; ++i) phi.push_back([i](const Point& x) { return std::sin(kTwoPi * x[i]); });
  const ScalarFunction psi = [](const Point& x) { return std::sin(kTwoPi * x[0]); };
  const FaceField pw = project_W(phi, g);
  const FaceField ge = ops.grad_E(project_Q(psi, g));

  InterpolationErrors e;
  const double h = g->h();
  const int samples = dim == 2 ? 9 : 27;
  for (Index id = 0; id < g->num_faces(); ++id) {
    const Face f = g->face(id);
    const Point c = g->face_center(f);
    for (int s = 0; s < samples; ++s) {
      int rest = s;
      Point x = c;
      for (int a = 0; a < dim; ++a) {
        x[a] += 0.5 * h * ((rest % 3) - 1);
        rest /= 3;
      }
      e.projection_w = std::max(e.projection_w, std::abs(pw(id) - std::sin(kTwoPi * x[f.axis])));
      const double dpsi = f.axis == 0 ? kTwoPi * std::cos(kTwoPi * x[0]) : 0.0;
      e.gradient_e = std::max(e.gradient_e, std::abs(ge(id) - dpsi));
    }
  }
  return e;
}

std::vector<PropertyResult> run_property_suite(const CheckConfig& config,
                                               const OperatorTable& ops) {
  std::mt19937_64 rng(config.seed);
  const std::vector<GridPtr> grids{build_grid(2, 8), build_grid(3, 4)};
  const double tol = config.tolerance;
  Worst grad_div, laplace_dual, w_dual, product, composition, telescoping;

  for (const GridPtr& g : grids) {
    const int d = g->dim();
    for (int trial = 0; trial < config.trials; ++trial) {
      const std::string tag = grid_tag(*g) + " trial " + std::to_string(trial);
      const CellField r = random_field(g, 1, rng);
      const CellField f = random_field(g, 1, rng);
      const CellField v = random_field(g, d, rng);

      {
        const CellField dv = ops.div_h(v);
        const CellField gr = ops.grad_h(r);
        const double res = inner(r, dv) + inner(gr, v);
        const double scale = l2_norm(r) * l2_norm(dv) + l2_norm(gr) * l2_norm(v);
        grad_div.update(std::abs(res) / scale, tag);
      }
      {
        const CellField lr = ops.laplace_h(r);
        const CellField lf = ops.laplace_h(f);
        const FaceField er = ops.grad_E(r);
        const FaceField ef = ops.grad_E(f);
        const double a = inner(lr, f);
        const double b = -face_inner(er, ef);
        const double c = inner(r, lf);
        const double scale =
            l2_norm(lr) * l2_norm(f) + l2_norm(er) * l2_norm(ef) + l2_norm(r) * l2_norm(lf);
        laplace_dual.update((std::abs(a - b) + std::abs(a - c)) / scale, tag);

        const CellField comp = ops.div_E(er);
        double diff = 0.0;
        for (Index k = 0; k < comp.cells(); ++k) diff = std::max(diff, std::abs(comp(k) - lr(k)));
        composition.update(diff / max_abs(lr.values()), tag);
      }
      {
        const TrigVector tv = random_trig_vector(d, rng);
        const CellField div_mean = project_Q(tv.div, g);
        const FaceField pw = project_W(tv.phi, g);
        const FaceField er = ops.grad_E(r);
        const double res = inner(r, div_mean) + face_inner(er, pw);
        const double scale = l2_norm(r) * l2_norm(div_mean) + l2_norm(er) * l2_norm(pw);
        w_dual.update(scale > 0.0 ? std::abs(res) / scale : 0.0, tag);
      }
      {
        CellField fg(g);
        for (Index k = 0; k < fg.cells(); ++k) fg(k) = r(k) * f(k);
        const double scale = max_abs(r.values()) * max_abs(f.values());
        double worst = 0.0;
        for (Index id = 0; id < g->num_faces(); ++id) {
          const Face face = g->face(id);
          const Traces a = ops.traces(r, face, 0);
          const Traces b = ops.traces(f, face, 0);
          const Traces ab = ops.traces(fg, face, 0);
          worst = std::max(worst,
                           std::abs(ab.jump - (a.jump * b.average + a.average * b.jump)));
        }
        product.update(worst / scale, tag);
      }
      {
        std::uniform_real_distribution<double> eps(-0.9, 0.9);
        const FluxParams fp{eps(rng), g->h()};
        const CellField out = ops.flux_divergence(r, v, fp);
        double sum = 0.0, abs_sum = 0.0;
        for (double x : out.values()) {
          sum += x;
          abs_sum += std::abs(x);
        }
        telescoping.update(abs_sum > 0.0 ? std::abs(sum) / abs_sum : 0.0, tag);
      }
    }
  }

  std::vector<PropertyResult> results;
  results.push_back(finish("duality_grad_div", grad_div, tol));
  results.push_back(finish("duality_laplace", laplace_dual, tol));
  results.push_back(finish("duality_projection_w", w_dual, tol));
  results.push_back(finish("jump_product_rule", product, tol));
  results.push_back(finish("laplace_composition", composition, tol));
  results.push_back(finish("flux_telescoping", telescoping, tol));

  {
    // eigenvalues strictly inside (lambda_lower, lambda_upper); the reported
    // value is the smallest margin relative to the bound, must stay > 0
    std::uniform_real_distribution<double> box(0.1, 10.0);
    std::uniform_real_distribution<double> gam(1.05, 3.0);
    double worst = std::numeric_limits<double>::infinity();
    std::string where;
    int violations = 0;
    for (int i = 0; i < config.hessian_samples; ++i) {
      const GasParams gas{i % 2 == 0 ? 1.4 : gam(rng)};
      const double rho = box(rng), th = box(rng);
      const auto ev = symmetric_eigenvalues(entropy_hessian(rho, th, gas));
      const HessianBounds b = hessian_bounds(rho, th, gas);
      const double m = std::min((ev[0] - b.lower) / b.lower, (b.upper - ev[1]) / b.upper);
      if (!(m > 0.0)) ++violations;
      if (m < worst) {
        worst = m;
        std::ostringstream os;
        os << "rho=" << rho << " theta=" << th << " gamma=" << gas.gamma;
        where = os.str();
      }
    }
    PropertyResult r;
    r.name = "hessian_bounds";
    r.worst = worst;
    r.threshold = 0.0;
    r.passed = violations == 0;
    r.detail = std::to_string(violations) + " violations; tightest at " + where;
    results.push_back(r);
  }

  {
    const std::vector<int> ns{8, 16, 32, 64};
    std::vector<InterpolationErrors> errs;
    for (int n : ns) errs.push_back(interpolation_errors(2, n, ops));
    double worst = std::numeric_limits<double>::infinity();
    std::ostringstream os;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
      const double rw = std::log2(errs[i].projection_w / errs[i + 1].projection_w);
      const double rg = std::log2(errs[i].gradient_e / errs[i + 1].gradient_e);
      worst = std::min({worst, rw, rg});
      os << (i ? "; " : "") << ns[i] << "->" << ns[i + 1] << " rates " << rw << ", " << rg;
    }
    PropertyResult r;
    r.name = "projection_decay";
    r.worst = worst;
    r.threshold = config.min_rate;
    r.passed = worst >= config.min_rate;
    r.detail = os.str();
    results.push_back(r);
  }
  return results;
}

}  // namespace fvnsf
