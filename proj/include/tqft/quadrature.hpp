#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tqft/errors.hpp"

namespace tqft {

using cd = std::complex<double>;

namespace detail {

// Boost reports the non-adaptive error for the rule mapped onto [-1, 1];
// rescale it to the interval's own units.
template <class F>
cd gk21(F& f, double a, double b, double& err, double& norm) {
  const cd r = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0,
                                                                          &err, &norm);
  err *= 0.5 * (b - a);
  return r;
}

template <class F>
cd gk_bisect(F& f, double a, double b, cd r, double err, double norm, double abs_tol,
             unsigned depth, double& l1) {
  if (err <= abs_tol || depth == 0 || !std::isfinite(err)) {
    l1 += norm;
    return r;
  }
  const double m = 0.5 * (a + b);
  double e1 = 0.0, n1 = 0.0, e2 = 0.0, n2 = 0.0;
  const cd r1 = gk21(f, a, m, e1, n1);
  const cd r2 = gk21(f, m, b, e2, n2);
  return gk_bisect(f, a, m, r1, e1, n1, 0.5 * abs_tol, depth - 1, l1) +
         gk_bisect(f, m, b, r2, e2, n2, 0.5 * abs_tol, depth - 1, l1);
}

}  // namespace detail

/// Adaptive 21-point Gauss-Kronrod on [a, b] for a complex integrand. The
/// error target is max(rel_tol * integral of |f|, abs_tol), so cancelling
/// integrands do not force needless refinement.
/// The optional l1 receives the integral of |f|.
template <class F>
cd integrate_interval(F&& f, double a, double b, double rel_tol = 1e-13,
                      double* l1 = nullptr, unsigned max_depth = 12, double abs_tol = 0.0) {
  double err = 0.0;
  double norm = 0.0;
  const cd r0 = detail::gk21(f, a, b, err, norm);
  double total = 0.0;
  const cd r = detail::gk_bisect(f, a, b, r0, err, norm, std::max(rel_tol * norm, abs_tol),
                                 max_depth, total);
  if (l1) *l1 = total;
  return r;
}

struct RayOptions {
  double panel = 1.0;        // panel width along the ray parameter
  double floor = 1e-16;      // stop once a panel is this small relative to the largest
  double rel_tol = 1e-13;    // per-panel Gauss-Kronrod tolerance
  double max_length = 4000;  // ConvergenceError beyond this
  double min_length = 2.0;   // never stop before covering this much
};

/// Integral of f along {origin + t*direction : t >= 0} with respect to the
/// complex line element, truncated once the integrand is negligible.
cd integrate_ray(const std::function<cd(cd)>& f, cd origin, cd direction,
                 const RayOptions& opt = {});

/// Integral of f along origin + R, left to right.
cd integrate_line(const std::function<cd(cd)>& f, cd origin = 0.0,
                  const RayOptions& opt = {});

/// Straight segment from z0 to z1.
cd integrate_segment(const std::function<cd(cd)>& f, cd z0, cd z1,
                     double rel_tol = 1e-13);

/// Pairwise (cascade) summation; the order is fixed by the input layout.
cd pairwise_sum(std::span<const cd> v);

/// (1/n) * sum_{k<n} f(k/n): the n-point rule for a 1-periodic integrand.
cd periodic_trapezoid(const std::function<cd(double)>& f, int n);

struct DoublingResult {
  cd value;
  double abs_err = 0.0;
  int n = 0;
  std::vector<std::pair<int, cd>> history;
};

/// Periodic rule with n doubled until two successive values differ by < tol.
DoublingResult periodic_integral(const std::function<cd(double)>& f, double tol,
                                 int n_start = 16, int n_max = 4096);

}  // namespace tqft
