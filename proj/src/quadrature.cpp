#include "tqft/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace tqft {

cd integrate_ray(const std::function<cd(cd)>& f, cd origin, cd direction,
                 const RayOptions& opt) {
  const cd dir = direction / std::abs(direction);
  std::vector<cd> parts;
  double peak = 0.0;
  int quiet = 0;
  for (double t0 = 0.0;; t0 += opt.panel) {
    if (t0 > opt.max_length) {
      throw ConvergenceError("ray integral did not decay within max_length");
    }
    double l1 = 0.0;
    cd v = integrate_interval([&](double t) { return f(origin + t * dir); }, t0,
                              t0 + opt.panel, opt.rel_tol, &l1, 12,
                              opt.rel_tol * peak);
    parts.push_back(v * dir);
    peak = std::max(peak, l1);
    if (!std::isfinite(l1)) throw ConvergenceError("non-finite ray integrand");
    if (t0 + opt.panel >= opt.min_length && l1 <= opt.floor * peak) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  return pairwise_sum(parts);
}

cd integrate_line(const std::function<cd(cd)>& f, cd origin, const RayOptions& opt) {
  return integrate_ray(f, origin, 1.0, opt) - integrate_ray(f, origin, -1.0, opt);
}

cd integrate_segment(const std::function<cd(cd)>& f, cd z0, cd z1, double rel_tol) {
  const cd d = z1 - z0;
  return d * integrate_interval([&](double t) { return f(z0 + t * d); }, 0.0, 1.0,
                                rel_tol);
}

cd pairwise_sum(std::span<const cd> v) {
  if (v.size() <= 8) {
    cd s = 0.0;
    for (const cd& x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

cd periodic_trapezoid(const std::function<cd(double)>& f, int n) {
  std::vector<cd> vals(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) vals[static_cast<std::size_t>(k)] = f(double(k) / n);
  return pairwise_sum(vals) / double(n);
}

DoublingResult periodic_integral(const std::function<cd(double)>& f, double tol,
                                 int n_start, int n_max) {
  DoublingResult r;
  cd prev = periodic_trapezoid(f, n_start);
  r.history.emplace_back(n_start, prev);
  for (int n = 2 * n_start; n <= n_max; n *= 2) {
    cd cur = periodic_trapezoid(f, n);
    r.history.emplace_back(n, cur);
    r.abs_err = std::abs(cur - prev);
    r.value = cur;
    r.n = n;
    if (r.abs_err < tol) return r;
    prev = cur;
  }
  throw ConvergenceError("periodic quadrature did not converge by n = " +
                         std::to_string(n_max));
}

}  // namespace tqft
