#include "tqft/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tqft/quadrature.hpp"

namespace tqft {

namespace {

cd log_phib_bar(cd z, const ModularParameter& p) {
  const cd zero = nearest_singularity(z, p, -1);
  if (std::abs(z - zero) < PhiOptions{}.pole_radius) {
    throw ZeroError("argument is within the pole radius of a zero of Phi_b", zero);
  }
  return -log_phib(z, p);
}

// Sums exp(term(m)) for m running outward from m0 in both directions.
// Stops on a side once the terms decrease and the geometric tail with the
// given rate is below tol (absolute, or relative to the largest term).
template <class Term>
cd outward_sum(Term&& term, int m0, double rate_left, double rate_right, double tol,
               bool relative, int cap = 10000) {
  if (!(rate_left > 0.0) || !(rate_right > 0.0)) {
    throw ConvergenceError("lattice sum does not decay: shape too close to the boundary");
  }
  std::vector<cd> right;
  std::vector<cd> left;
  double peak = 0.0;
  const cd t0 = std::exp(term(m0));
  right.push_back(t0);
  peak = std::abs(t0);
  for (int dir : {1, -1}) {
    const double rate = dir > 0 ? rate_right : rate_left;
    const double geo = 1.0 / (1.0 - std::exp(-rate));
    double prev = std::abs(t0);
    std::vector<cd>& out = dir > 0 ? right : left;
    for (int k = 1;; ++k) {
      if (k > cap) throw ConvergenceError("lattice sum needs more than 10^4 terms");
      const cd v = std::exp(term(m0 + dir * k));
      out.push_back(v);
      const double a = std::abs(v);
      peak = std::max(peak, a);
      const double target = relative ? tol * peak : tol;
      if (a <= prev && a * geo < 0.25 * target) break;
      prev = a;
    }
  }
  std::reverse(left.begin(), left.end());
  left.insert(left.end(), right.begin(), right.end());
  return pairwise_sum(left);
}

}  // namespace

cd log_psi(const Shape& s, cd t, const ModularParameter& p) {
  const cd ac = s.a + s.c;
  const cd cb = p.c_b;
  return log_phib_bar(t - 2.0 * cb * ac, p) - 4.0 * kPi * kI * cb * s.a * (t - cb * ac) -
         kPi * kI * cb * cb * (4.0 * (s.a - s.c) + 1.0) / 6.0;
}

cd psi(const Shape& s, cd t, const ModularParameter& p) { return std::exp(log_psi(s, t, p)); }

cd psi_form2(const Shape& s, cd t, const ModularParameter& p) {
  const cd b = s.b();
  const cd cb = p.c_b;
  return std::exp(log_phib_bar(t + cb * (2.0 * b - 1.0), p) -
                  4.0 * kPi * kI * cb * s.a * (t + cb * b) +
                  kPi * kI * cb * cb * (4.0 * (s.a - b) + 1.0) / 6.0);
}

cd log_psi_bar(const Shape& s, cd t, const ModularParameter& p) {
  const cd ac = s.a + s.c;
  const cd cb = p.c_b;
  return log_phib(t + 2.0 * cb * ac, p) - 4.0 * kPi * kI * cb * s.a * (t + cb * ac) +
         kPi * kI * cb * cb * (4.0 * (s.a - s.c) + 1.0) / 6.0;
}

cd psi_bar(const Shape& s, cd t, const ModularParameter& p) {
  return std::exp(log_psi_bar(s, t, p));
}

cd psi_bar_form2(const Shape& s, cd t, const ModularParameter& p) {
  const cd b = s.b();
  const cd cb = p.c_b;
  return std::exp(log_phib(t + cb * (1.0 - 2.0 * b), p) -
                  4.0 * kPi * kI * cb * s.a * (t - cb * b) +
                  kPi * kI * cb * cb * (4.0 * (b - s.a) - 1.0) / 6.0);
}

cd log_tilde_psi_prime(const Shape& s, cd x, const ModularParameter& p) {
  return -kI * kPi / 12.0 + log_psi(Shape{s.c, s.b()}, x, p);
}

cd tilde_psi_prime(const Shape& s, cd x, const ModularParameter& p) {
  return std::exp(log_tilde_psi_prime(s, x, p));
}

cd tilde_psi(const Shape& s, cd x, const ModularParameter& p) {
  return std::exp(kI * kPi * x * x + log_tilde_psi_prime(s, x, p));
}

DecayRates psi_decay(const Shape& s, const ModularParameter& p) {
  return {4.0 * kPi * (p.c_b * s.a).imag(), 4.0 * kPi * (p.c_b * s.c).imag()};
}

cd fourier_tpsi(const Shape& s, double x, const ModularParameter& p) {
  const DecayRates r = psi_decay(s, p);
  if (!(r.left > 0.0 && r.right > 0.0)) {
    throw ConvergenceError("psi does not decay for this shape");
  }
  auto f = [&](cd t) { return std::exp(log_psi(s, t, p) - 2.0 * kPi * kI * x * t); };
  RayOptions o;
  o.panel = std::min(1.0, 2.0 / (1.0 + std::abs(x)));
  o.floor = 1e-17;
  o.rel_tol = 1e-13;
  o.max_length = 1e4;
  return integrate_line(f, 0.0, o);
}

WeightSeries::WeightSeries(const Shape& s, cd s0, const ModularParameter& p, double tol,
                           double im_t_max)
    : s0_(s0) {
  const Shape sw{s.c, s.b()};
  const DecayRates r = psi_decay(sw, p);
  const double rate_left = r.left - 2.0 * kPi * im_t_max;
  const double rate_right = r.right - 2.0 * kPi * s0.imag() - 2.0 * kPi * im_t_max;
  if (!(rate_left > 0.0) || !(rate_right > 0.0)) {
    throw ConvergenceError("g series does not decay: shape too close to the boundary");
  }
  const int m0 = int(std::lround(-s0.real()));
  std::vector<cd> right;
  std::vector<cd> left;
  for (int dir : {1, -1}) {
    const double rate = dir > 0 ? rate_right : rate_left;
    const double geo = 1.0 / (1.0 - std::exp(-rate));
    std::vector<cd>& out = dir > 0 ? right : left;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = dir > 0 ? 0 : 1;; ++k) {
      if (k > 10000) throw ConvergenceError("g series needs more than 10^4 terms");
      const int m = m0 + dir * k;
      const cd l = log_tilde_psi_prime(s, s0 + double(m), p);
      out.push_back(l);
      const double bound = std::exp(l.real() + 2.0 * kPi * im_t_max * std::abs(m));
      if (bound <= prev && bound * geo < 0.25 * tol) break;
      prev = bound;
    }
  }
  m_lo_ = m0 - int(left.size());
  std::reverse(left.begin(), left.end());
  left.insert(left.end(), right.begin(), right.end());
  log_terms_ = std::move(left);
}

cd WeightSeries::operator()(cd t) const {
  std::vector<cd> v(log_terms_.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double m = double(m_lo_ + int(k));
    v[k] = std::exp(log_terms_[k] + kI * kPi * t * (s0_ + 2.0 * m));
  }
  return pairwise_sum(v);
}

cd g(const Shape& s, cd x, cd y, const ModularParameter& p, double tol) {
  return WeightSeries(s, x, p, tol, std::abs(y.imag()))(y);
}

cd g_bar(const Shape& s, cd x, cd y, const ModularParameter& p, double tol) {
  return g(Shape{s.a, s.b()}, -x, y - x - 0.5, p, tol) * std::exp(-kI * kPi * x / 2.0);
}

cd wgz(const DecayingFunction& f, double x, double y, double tol) {
  auto term = [&](int m) { return std::log(f.f(x + m)) + 2.0 * kPi * kI * double(m) * y; };
  const int m0 = int(std::lround(-x));
  return std::exp(kI * kPi * x * y) *
         outward_sum(term, m0, f.rate_left, f.rate_right, tol, false);
}

double quasi_periodicity_defect(const QuasiPeriodicSection& s, double x, double y) {
  const cd v = s(x, y);
  const double dx = std::abs(s(x + 1.0, y) - QuasiPeriodicSection::px(y) * v);
  const double dy = std::abs(s(x, y + 1.0) - QuasiPeriodicSection::py(x) * v);
  return std::max(dx, dy);
}

cd wgz_inverse(const QuasiPeriodicSection& s, double x, double tol) {
  auto f = [&](double y) { return s(x, y) * std::exp(-kI * kPi * x * y); };
  return periodic_integral(f, tol, 16, 4096).value;
}

double phi_direct_margin(cd x, cd y) {
  return 2.0 * kPi * std::min(-y.imag(), x.imag() + y.imag());
}

cd phi_wgz_direct(cd x, cd y, const ModularParameter& p, double tol) {
  if (!(x.imag() > -y.imag() && -y.imag() > 0.0)) {
    throw DomainError("direct WGZ sum of Phi_b needs Im x > -Im y > 0");
  }
  auto term = [&](int m) { return log_phib(x + double(m), p) + 2.0 * kPi * kI * double(m) * y; };
  const int m0 = int(std::lround(-x.real()));
  const double rl = -2.0 * kPi * y.imag();
  const double rr = 2.0 * kPi * (x.imag() + y.imag());
  return std::exp(kI * kPi * x * y) * outward_sum(term, m0, rl, rr, tol, true);
}

cd phi_wgz_via_d2(cd x, cd y, const ModularParameter& p, double tol) {
  const cd cb = p.c_b;
  return p.zeta_o * std::exp(kI * kPi * (cb * (x + y - 0.5) - y / 2.0)) *
         phi_wgz_direct(cb + y, 0.5 - x - y, p, tol);
}

cd phi_wgz_via_d3(cd x, cd y, const ModularParameter& p, double tol) {
  const cd cb = p.c_b;
  return std::exp(kI * kPi * (cb * y + (x - cb) / 2.0)) / p.zeta_o *
         phi_wgz_direct(cb + 0.5 - x - y, x - cb, p, tol);
}

namespace {

constexpr double kMinMargin = 0.05;

struct Placement {
  double margin;
  int region;  // 1, 2, 3
};

Placement best_placement(cd x, cd y, const ModularParameter& p) {
  const cd cb = p.c_b;
  const double m1 = phi_direct_margin(x, y);
  const double m2 = phi_direct_margin(cb + y, 0.5 - x - y);
  const double m3 = phi_direct_margin(cb + 0.5 - x - y, x - cb);
  Placement r{m1, 1};
  if (m2 > r.margin) r = {m2, 2};
  if (m3 > r.margin) r = {m3, 3};
  return r;
}

cd eval_placed(cd x, cd y, int region, const ModularParameter& p, double tol) {
  switch (region) {
    case 1: return phi_wgz_direct(x, y, p, tol);
    case 2: return phi_wgz_via_d2(x, y, p, tol);
    default: return phi_wgz_via_d3(x, y, p, tol);
  }
}

}  // namespace

PhiValue phi_wgz_eval(cd x, cd y, const ModularParameter& p, double tol) {
  const Placement here = best_placement(x, y, p);
  if (here.margin > kMinMargin) {
    const PhiRegion r = here.region == 1   ? PhiRegion::d1
                        : here.region == 2 ? PhiRegion::d2
                                           : PhiRegion::d3;
    return {eval_placed(x, y, here.region, p, tol), r};
  }
  // phi(u, v) + e^{pi beta u - i pi beta^2} phi(u, v - i beta) = e^{-pi beta v} phi(u - i beta, v)
  // with the target at one of the three stencil points.
  double best = kMinMargin;
  int best_role = -1;
  cd best_beta;
  for (cd beta : {p.b, 1.0 / p.b}) {
    const cd ib = kI * beta;
    const std::array<std::array<cd, 2>, 3> base{{{x, y}, {x, y + ib}, {x + ib, y}}};
    for (int role = 0; role < 3; ++role) {
      const cd u = base[std::size_t(role)][0];
      const cd v = base[std::size_t(role)][1];
      const std::array<std::array<cd, 2>, 3> pts{{{u, v}, {u, v - ib}, {u - ib, v}}};
      double m = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 3; ++k) {
        if (k == role) continue;
        m = std::min(m, best_placement(pts[std::size_t(k)][0], pts[std::size_t(k)][1], p).margin);
      }
      if (m > best) {
        best = m;
        best_role = role;
        best_beta = beta;
      }
    }
  }
  if (best_role < 0) {
    throw DomainError("point is outside the implemented continuation region of phi_b");
  }
  const cd beta = best_beta;
  const cd ib = kI * beta;
  auto at = [&](cd u, cd v) { return phi_wgz_eval(u, v, p, tol).value; };
  cd value;
  if (best_role == 0) {
    value = std::exp(-kPi * beta * y) * at(x - ib, y) -
            std::exp(kPi * beta * x - kI * kPi * beta * beta) * at(x, y - ib);
  } else if (best_role == 1) {
    const cd v = y + ib;
    value = (std::exp(-kPi * beta * v) * at(x - ib, v) - at(x, v)) /
            std::exp(kPi * beta * x - kI * kPi * beta * beta);
  } else {
    const cd u = x + ib;
    value = std::exp(kPi * beta * y) *
            (at(u, y) + std::exp(kPi * beta * u - kI * kPi * beta * beta) * at(u, y - ib));
  }
  return {value, PhiRegion::functional_step};
}

cd phi_wgz(cd x, cd y, const ModularParameter& p, double tol) {
  return phi_wgz_eval(x, y, p, tol).value;
}

cd xi(cd x, const ModularParameter& p) {
  if (!p.is_real()) throw DomainError("xi needs real b");
  const double b = p.b.real();
  const double eb = std::exp(-2.0 * kPi * b);
  cd prod = 1.0;
  long count = 0;
  for (int n = 0;; ++n) {
    const cd base = std::exp(2.0 * kPi * (kI * x - double(n) / b));
    if (std::abs(base) / (1.0 - eb) < 1e-17) break;
    cd term = base;
    for (int m = 0;; ++m) {
      if (++count > 1000000) throw ConvergenceError("xi product did not converge");
      if (std::abs(term) < 1e-17 * (1.0 - eb)) break;
      prod *= 1.0 - term;
      term *= eb;
    }
  }
  return prod;
}

cd chi(cd x, cd y, const ModularParameter& p) {
  return xi(p.c_b - x, p) * xi(-y, p) * xi(x + y + 0.5, p);
}

std::array<double, 2> weight_arguments(const TetEdgeValues& x) {
  // order 01, 02, 03, 12, 13, 23
  return {x[1] + x[4] - x[2] - x[3], x[1] + x[4] - x[0] - x[5]};
}

cd boltzmann_weight(const Shape& s, int sign, const TetEdgeValues& x,
                    const ModularParameter& p, double tol) {
  const auto st = weight_arguments(x);
  return sign > 0 ? g(s, st[0], st[1], p, tol) : g_bar(s, st[0], st[1], p, tol);
}

}  // namespace tqft
