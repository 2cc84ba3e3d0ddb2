#include "tqft/qdilog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tqft/quadrature.hpp"

namespace tqft {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// log sinh(x) up to a multiple of 2 pi i.
cd log_sinh(cd x) {
  if (x.real() < 0) return cd(0, kPi) + log_sinh(-x);
  if (x.real() < 20.0) return std::log(std::sinh(x));
  return x - kLn2 - std::exp(-2.0 * x);
}

// log(1 + e^x) up to a multiple of 2 pi i.
cd log1p_exp(cd x) {
  if (x.real() > 35.0) return x + std::exp(-x);
  if (x.real() < -35.0) return std::exp(x);
  return std::log(1.0 + std::exp(x));
}

cd log_integrand(cd w, cd z, const ModularParameter& p) {
  return -2.0 * kI * z * w - 2.0 * kLn2 - log_sinh(p.b * w) - log_sinh(w / p.b) -
         std::log(w);
}

RayOptions line_options(cd z, const ModularParameter& p) {
  RayOptions o;
  o.panel = std::min({1.0, 2.0 * p.line_offset, 4.0 / (2.0 * std::abs(z.real()) + 1.0)});
  o.floor = 1e-17;
  o.rel_tol = 1e-14;
  o.min_length = 2.0 * o.panel;
  o.max_length = 1e5;
  return o;
}

double tail_bound_for(const ModularParameter& p) {
  const double h = p.strip;
  auto f = [&](cd w) -> cd {
    cd l = log_integrand(w, 0.0, p);
    return std::exp(l.real() + h * std::abs(w.real()));
  };
  RayOptions o;
  o.panel = std::min(1.0, 2.0 * p.line_offset);
  o.floor = 1e-17;
  o.rel_tol = 1e-10;
  const cd origin(0.0, p.line_offset);
  return (integrate_ray(f, origin, 1.0, o) - integrate_ray(f, origin, -1.0, o)).real();
}

// The line Im w = Y sits halfway between the pole at 0 and the next pole
// above, so the integrand is analytic within Y of the line. With the step
// below the trapezoid error is e^{-2 pi d / h} times the integral of |f| on
// the shifted lines, and for Re z <= 0 the growth of e^{-2izw} on the lower
// line is offset by the factor e^{2 Re z Y} on the middle one.
void build_trapezoid(ModularParameter& p) {
  const double d = 0.9 * p.line_offset;
  const double step = 2.0 * kPi * d / (52.0 + std::log(std::max(1.0, p.tail_bound)));
  const double span = 46.0 / p.strip;
  const int half = int(std::ceil(span / step));
  auto w = std::make_shared<std::vector<cd>>(std::size_t(2 * half + 1));
  for (int k = -half; k <= half; ++k) {
    const cd node(k * step, p.line_offset);
    (*w)[std::size_t(k + half)] = step * std::exp(log_integrand(node, 0.0, p));
  }
  p.trap_step = step;
  p.trap_half = half;
  p.trap_weights = std::move(w);
}

cd log_phib_trapezoid(cd z, const ModularParameter& p) {
  const std::vector<cd>& w = *p.trap_weights;
  const int half = p.trap_half;
  const cd rho = std::exp(-2.0 * kI * z * p.trap_step);
  cd sum = w[std::size_t(half)];
  for (int dir : {1, -1}) {
    const cd r = dir > 0 ? rho : 1.0 / rho;
    cd pw = 1.0;
    for (int k = 1; k <= half; ++k) {
      // Resynchronize the running power now and then.
      pw = (k % 32 == 0) ? std::exp(-2.0 * kI * z * (dir * k * p.trap_step)) : pw * r;
      sum += w[std::size_t(half + dir * k)] * pw;
    }
  }
  return std::exp(2.0 * z * p.line_offset) * sum;
}

}  // namespace

ModularParameter make_parameter(cd b) {
  if (!(b.real() > 0.0) || b.imag() < 0.0 || !std::isfinite(std::abs(b))) {
    throw DomainError("b must satisfy Re b > 0 and Im b >= 0");
  }
  ModularParameter p;
  p.b = b;
  const cd s = b + 1.0 / b;
  p.c_b = 0.5 * kI * s;
  p.hbar = 1.0 / (s * s);
  p.q = std::exp(kI * kPi * b * b);
  p.qbar = std::exp(-kI * kPi / (b * b));
  const cd c2 = p.c_b * p.c_b;
  p.log_zeta_inv = kI * kPi * (1.0 + 2.0 * c2) / 6.0;
  p.log_zeta_o = kI * kPi * (1.0 - 4.0 * c2) / 12.0;
  p.zeta_inv = std::exp(p.log_zeta_inv);
  p.zeta_o = std::exp(p.log_zeta_o);
  p.strip = p.c_b.imag();
  p.line_offset = 0.5 * kPi * std::min(b.real(), (1.0 / b).real());
  p.tail_bound = tail_bound_for(p);
  build_trapezoid(p);
  return p;
}

ModularParameter normalized_parameter(cd b) {
  if (b.real() == 0.0) throw DomainError("b on the imaginary axis is not supported");
  if (b.real() < 0.0) b = -b;
  if (b.imag() < 0.0) b = 1.0 / b;
  return make_parameter(b);
}

StripPoint strip_point(cd z, const ModularParameter& p) {
  return {z, std::abs(z.imag()) < std::abs(p.strip)};
}

cd log_phib_integral(cd z, const ModularParameter& p) {
  if (!(std::abs(z.imag()) < p.strip)) {
    throw DomainError("contour integral needs |Im z| < Im c_b");
  }
  auto f = [&](cd w) { return std::exp(log_integrand(w, z, p)); };
  return integrate_line(f, cd(0.0, p.line_offset), line_options(z, p));
}

cd log_phib_strip(cd z, const ModularParameter& p) {
  if (!(std::abs(z.imag()) < p.strip)) {
    throw DomainError("strip evaluation needs |Im z| < Im c_b");
  }
  if (z.real() > 0.0) {
    return kI * kPi * z * z - p.log_zeta_inv - log_phib_strip(-z, p);
  }
  if (std::abs(z.imag()) <= 0.5 * p.strip) {
    if (2.0 * z.real() * p.line_offset + std::log(p.tail_bound) < -42.0) return 0.0;
    return log_phib_trapezoid(z, p);
  }
  return log_phib_integral(z, p);
}

cd nearest_singularity(cd z, const ModularParameter& p, int sign) {
  const cd t = sign >= 0 ? z : -z;
  const cd ib = kI * p.b;
  const cd ibinv = kI / p.b;
  cd best = p.c_b;
  double best_d = std::abs(t - p.c_b);
  const double step_m = ib.imag();
  for (int n = 0; n < 20000; ++n) {
    const cd base = p.c_b + double(n) * ibinv;
    if (base.imag() > t.imag() + best_d) break;
    const double mr = (t.imag() - base.imag()) / step_m;
    const int m0 = std::max(0, int(std::floor(mr)) - 1);
    for (int m = m0; m <= m0 + 3; ++m) {
      const cd c = base + double(m) * ib;
      const double d = std::abs(t - c);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
  }
  return sign >= 0 ? best : -best;
}

cd log_phib(cd z, const ModularParameter& p, const PhiOptions& opt) {
  const cd pole = nearest_singularity(z, p, +1);
  if (std::abs(z - pole) < opt.pole_radius) {
    throw PoleError("z is within the pole radius of a pole of Phi_b", pole);
  }
  const double half = 0.5 * p.strip;
  const double sb = p.b.real();
  const double sinv = (1.0 / p.b).real();
  const bool b_big = sb >= sinv;
  const double big = b_big ? sb : sinv;
  const cd beta_big = b_big ? p.b : 1.0 / p.b;
  const cd beta_small = b_big ? 1.0 / p.b : p.b;

  cd acc = 0.0;
  int steps = 0;
  while (z.imag() > half) {
    if (++steps > opt.max_ladder) throw LadderOverflow("ladder exceeded the step limit");
    const cd beta = (z.imag() - big >= -half) ? beta_big : beta_small;
    // Phi(z) = Phi(z - i beta) / (1 + e^{2 pi beta (z - i beta / 2)})
    acc -= log1p_exp(2.0 * kPi * beta * (z - 0.5 * kI * beta));
    z -= kI * beta;
  }
  while (z.imag() < -half) {
    if (++steps > opt.max_ladder) throw LadderOverflow("ladder exceeded the step limit");
    const cd beta = (z.imag() + big <= half) ? beta_big : beta_small;
    // Phi(z) = (1 + e^{2 pi beta (z + i beta / 2)}) Phi(z + i beta)
    acc += log1p_exp(2.0 * kPi * beta * (z + 0.5 * kI * beta));
    z += kI * beta;
  }
  return acc + log_phib_strip(z, p);
}

cd phib(cd z, const ModularParameter& p, const PhiOptions& opt) {
  return std::exp(log_phib(z, p, opt));
}

cd phib_bar(cd z, const ModularParameter& p, const PhiOptions& opt) {
  const cd zero = nearest_singularity(z, p, -1);
  if (std::abs(z - zero) < opt.pole_radius) {
    throw ZeroError("z is within the pole radius of a zero of Phi_b", zero);
  }
  return std::exp(-log_phib(z, p, opt));
}

cd q_pochhammer(cd x, cd q) {
  if (!(std::abs(q) < 1.0)) throw DomainError("q-Pochhammer needs |q| < 1");
  cd prod = 1.0;
  cd term = x;
  for (int k = 0; k < 1000000; ++k) {
    if (std::abs(term) < 1e-18) return prod;
    prod *= 1.0 - term;
    term *= q;
  }
  throw ConvergenceError("q-Pochhammer product did not converge");
}

cd phib_product_oracle(cd z, const ModularParameter& p) {
  if (!((p.b * p.b).imag() > 0.0)) throw DomainError("product formula needs Im b^2 > 0");
  const cd num = q_pochhammer(std::exp(2.0 * kPi * (z + p.c_b) * p.b), p.q * p.q);
  const cd den = q_pochhammer(std::exp(2.0 * kPi * (z - p.c_b) / p.b), p.qbar * p.qbar);
  return num / den;
}

cd theta(cd z, cd tau) {
  if (!(tau.imag() > 0.0)) throw DomainError("theta needs Im tau > 0");
  auto expo = [&](double n) { return kI * kPi * tau * n * n + 2.0 * kPi * kI * z * n; };
  const long n0 = std::lround(-z.imag() / tau.imag());
  const double peak = expo(double(n0)).real();
  cd sum = std::exp(expo(double(n0)) - peak);
  for (int dir : {1, -1}) {
    for (long k = 1;; ++k) {
      const cd e = expo(double(n0 + dir * k)) - peak;
      if (e.real() < -42.0) break;
      sum += std::exp(e);
    }
  }
  return sum * std::exp(peak);
}

std::vector<PoleZero> pole_zero_locations(int m_max, int n_max, const ModularParameter& p) {
  std::vector<PoleZero> out;
  for (int m = 0; m <= m_max; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      const cd s = p.c_b + double(m) * kI * p.b + double(n) * kI / p.b;
      out.push_back({-s, PoleZeroKind::zero, m, n});
      out.push_back({s, PoleZeroKind::pole, m, n});
    }
  }
  return out;
}

std::string to_string(AsymptoticSector s) {
  switch (s) {
    case AsymptoticSector::unit: return "unit";
    case AsymptoticSector::gaussian: return "gaussian";
    case AsymptoticSector::theta_upper: return "theta_upper";
    case AsymptoticSector::theta_lower: return "theta_lower";
  }
  return "unknown";
}

AsymptoticRegime asymptotic_regime(cd z, const ModularParameter& p, double threshold) {
  if (threshold <= 0.0) threshold = 5.0 * (1.0 + std::abs(p.c_b));
  if (std::abs(z) <= threshold) {
    throw DomainError("|z| is below the asymptotic threshold");
  }
  const double th = std::arg(p.b);
  const double a = std::arg(z);
  const double boundaries[] = {kPi / 2 + th, kPi / 2 - th, -kPi / 2 + th, -kPi / 2 - th};
  for (double bnd : boundaries) {
    if (std::abs(a - bnd) < 1e-6) throw SectorBoundaryError("arg z is on a sector boundary");
  }
  if (std::abs(a) > kPi / 2 + th) return {AsymptoticSector::unit, 1.0};
  if (std::abs(a) < kPi / 2 - th) {
    return {AsymptoticSector::gaussian, std::exp(kI * kPi * z * z - p.log_zeta_inv)};
  }
  if (a > 0) {
    const cd q2 = p.qbar * p.qbar;
    return {AsymptoticSector::theta_upper,
            q_pochhammer(q2, q2) / theta(kI * z / p.b, -1.0 / (p.b * p.b))};
  }
  const cd q2 = p.q * p.q;
  return {AsymptoticSector::theta_lower, theta(kI * p.b * z, p.b * p.b) / q_pochhammer(q2, q2)};
}

double bernoulli_half(int n) {
  static constexpr std::array<double, 5> v{1.0, -1.0 / 12.0, 7.0 / 240.0, -31.0 / 1344.0,
                                           127.0 / 3840.0};
  if (n < 0 || n >= int(v.size())) throw DomainError("bernoulli_half supports n <= 4");
  return v[std::size_t(n)];
}

double logistic_derivative(int k, double x) {
  // d^k sigma / dx^k = P_k(sigma) with P_{k+1} = P_k'(s) (s - s^2).
  std::vector<double> c{0.0, 1.0};
  for (int j = 0; j < k; ++j) {
    std::vector<double> d(c.size() + 1, 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) {
      const double di = c[i] * double(i);
      d[i] += di;
      d[i + 1] -= di;
    }
    c = std::move(d);
  }
  const double s = 1.0 / (1.0 + std::exp(-x));
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * s + c[i];
  return r;
}

double dilog_real(double x) {
  constexpr double pi2_6 = kPi * kPi / 6.0;
  if (x > 1.0) throw DomainError("dilog_real needs x <= 1");
  if (x == 1.0) return pi2_6;
  if (x < -1.0) {
    const double l = std::log(-x);
    return -pi2_6 - 0.5 * l * l - dilog_real(1.0 / x);
  }
  if (x < -0.5) {
    const double l = std::log1p(-x);
    return -dilog_real(x / (x - 1.0)) - 0.5 * l * l;
  }
  if (x > 0.5) {
    return pi2_6 - std::log(x) * std::log1p(-x) - dilog_real(1.0 - x);
  }
  double sum = 0.0;
  double pw = x;
  for (int k = 1; k < 80; ++k) {
    sum += pw / (double(k) * k);
    pw *= x;
    if (std::abs(pw) < 1e-20) break;
  }
  return sum;
}

cd quasiclassical_logphib(double x, const ModularParameter& p, int order) {
  if (!p.is_real() || !(p.b.real() > 0.0 && p.b.real() <= 0.5)) {
    throw DomainError("quasi-classical expansion needs real b in (0, 0.5]");
  }
  if (order < 0 || order > 4) throw DomainError("quasi-classical order must be in [0, 4]");
  const cd h = 2.0 * kPi * kI * p.b * p.b;
  cd sum = dilog_real(-std::exp(x)) / h;
  double fact = 1.0;
  cd hp = 1.0 / h;
  for (int n = 1; n <= order; ++n) {
    fact *= double(2 * n - 1) * double(2 * n);
    hp *= h * h;
    sum += hp * bernoulli_half(n) / fact * -logistic_derivative(2 * n - 2, x);
  }
  return sum;
}

}  // namespace tqft
