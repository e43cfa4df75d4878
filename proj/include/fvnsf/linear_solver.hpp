#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace fvnsf {

struct KrylovResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// Jacobi-preconditioned BiCGSTAB for A x = b. `apply(in, out)` must overwrite
/// `out` with A*in. `x` holds the initial guess on entry.
template <class Apply>
KrylovResult bicgstab(Apply&& apply, std::span<const double> inv_diag, std::span<const double> b,
                      std::span<double> x, double tol, int max_iter) {
  const std::size_t n = b.size();
  std::vector<double> r(n), r_hat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), y(n), z(n);

  apply(std::span<const double>(x.data(), n), std::span<double>(r));
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

  const double b_norm = std::sqrt(detail::dot(b, b));
  KrylovResult res;
  if (b_norm == 0.0) {
    for (auto& xi : x) xi = 0.0;
    res.converged = true;
    return res;
  }
  double r_norm = std::sqrt(detail::dot(r, r));
  res.relative_residual = r_norm / b_norm;
  if (res.relative_residual <= tol) {
    res.converged = true;
    return res;
  }

  r_hat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    const double rho_new = detail::dot(r_hat, r);
    if (rho_new == 0.0) break;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);

    for (std::size_t i = 0; i < n; ++i) y[i] = inv_diag[i] * p[i];
    apply(std::span<const double>(y), std::span<double>(v));
    const double rv = detail::dot(r_hat, v);
    if (rv == 0.0) break;
    alpha = rho / rv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];

    const double s_norm = std::sqrt(detail::dot(s, s));
    if (s_norm / b_norm <= tol) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
      res.iterations = it;
      res.relative_residual = s_norm / b_norm;
      res.converged = true;
      return res;
    }

    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * s[i];
    apply(std::span<const double>(z), std::span<double>(t));
    const double tt = detail::dot(t, t);
    omega = tt > 0.0 ? detail::dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * y[i] + omega * z[i];
      r[i] = s[i] - omega * t[i];
    }
    r_norm = std::sqrt(detail::dot(r, r));
    res.iterations = it;
    res.relative_residual = r_norm / b_norm;
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
    if (omega == 0.0) break;
  }
  return res;
}

}  // namespace fvnsf
