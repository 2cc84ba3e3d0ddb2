#include "tqft/identities.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <random>
#include <thread>

#include "json.hpp"
#include "tqft/integrator.hpp"
#include "tqft/quadrature.hpp"

namespace tqft {

namespace {

double rel_defect(cd lhs, cd rhs) {
  const double scale = std::max(std::abs(rhs), 1e-300);
  return std::abs(lhs - rhs) / scale;
}

cd e_i_pi(cd x) { return std::exp(kI * kPi * x); }

cd lphi(cd z, const ModularParameter& p) { return log_phib(z, p); }

RayOptions line_options(double rel_tol) {
  RayOptions o;
  o.panel = 1.0;
  o.floor = 1e-17;
  o.rel_tol = rel_tol;
  o.max_length = 1e4;
  return o;
}

// Uniform sampler over a box in the complex plane.
struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  cd complex(double re_lo, double re_hi, double im_lo, double im_hi) {
    const double re = real(re_lo, re_hi);
    return {re, real(im_lo, im_hi)};
  }
};

template <class Draw, class Accept>
auto rejection_sample(Draw draw, Accept accept, const char* what) {
  for (int i = 0; i < 1000000; ++i) {
    auto v = draw();
    if (accept(v)) return v;
  }
  throw ConvergenceError(std::string("no admissible sample found for ") + what);
}

}  // namespace

IdentityReport make_report(std::string identity, std::vector<std::pair<std::string, cd>> params,
                           cd lhs, cd rhs, double tol, bool control) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.defect = rel_defect(lhs, rhs);
  r.tol = tol;
  r.control = control;
  r.pass = control ? r.defect > tol : r.defect <= tol;
  return r;
}

std::string IdentityReport::to_json() const {
  using nlohmann::json;
  auto num = [](cd v) -> json {
    if (v.imag() == 0.0) return v.real();
    return json::array({v.real(), v.imag()});
  };
  json params_j = json::object();
  for (const auto& [k, v] : params) params_j[k] = num(v);
  json j;
  j["identity"] = identity;
  j["params"] = params_j;
  j["lhs"] = json::array({lhs.real(), lhs.imag()});
  j["rhs"] = json::array({rhs.real(), rhs.imag()});
  j["defect"] = std::isfinite(defect) ? json(defect) : json(nullptr);
  j["tol"] = tol;
  if (control) j["control"] = true;
  j["pass"] = pass;
  j["seed"] = seed;
  return j.dump();
}

cd contour_integral(const std::function<cd(cd)>& f, const Contour& c, double rel_tol) {
  const RayOptions o = line_options(rel_tol);
  return integrate_ray(f, c.origin, c.right_dir, o) - integrate_ray(f, c.origin, c.left_dir, o);
}

// ---- Phi_b relations ----

IdentityReport check_inversion(cd z, const ModularParameter& p, double tol) {
  const cd lhs = std::exp(lphi(z, p) + lphi(-z, p));
  const cd rhs = std::exp(-p.log_zeta_inv + kI * kPi * z * z);
  return make_report("inversion", {{"z", z}, {"b", p.b}}, lhs, rhs, tol);
}

IdentityReport check_shift(cd z, bool inverse_b, const ModularParameter& p, double tol) {
  const cd beta = inverse_b ? 1.0 / p.b : p.b;
  const cd lhs = phib(z - kI * beta / 2.0, p);
  const cd rhs = (1.0 + std::exp(2.0 * kPi * beta * z)) * phib(z + kI * beta / 2.0, p);
  return make_report(inverse_b ? "shift_inverse_b" : "shift_b", {{"z", z}, {"b", p.b}}, lhs,
                     rhs, tol);
}

IdentityReport check_unitarity(cd z, const ModularParameter& p, double tol) {
  const cd lhs = std::conj(phib(z, p));
  const cd rhs = 1.0 / phib(std::conj(z), p);
  return make_report("unitarity", {{"z", z}, {"b", p.b}}, lhs, rhs, tol);
}

IdentityReport check_product_oracle(cd z, const ModularParameter& p, double tol) {
  return make_report("product_oracle", {{"z", z}, {"b", p.b}}, phib(z, p),
                     phib_product_oracle(z, p), tol);
}

QuasiclassicalFit quasiclassical_fit(double x, const std::vector<double>& bs) {
  QuasiclassicalFit fit;
  for (double b : bs) {
    const ModularParameter p = make_parameter(b);
    const cd h = 2.0 * kPi * kI * b * b;
    const cd exact = lphi(x / (2.0 * kPi * b), p);
    const cd approx = quasiclassical_logphib(x, p, 1);
    fit.b.push_back(b);
    fit.defect.push_back(std::abs(h * (exact - approx)));
  }
  // least-squares slope of log defect against log b
  const std::size_t n = fit.b.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(fit.b[i]);
    const double ly = std::log(fit.defect[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = double(n) * sxx - sx * sx;
  fit.slope = den != 0.0 ? (double(n) * sxy - sx * sy) / den : 0.0;
  return fit;
}

// ---- pentagon ----

std::array<Shape, 5> pentagon_shapes(double a0, double a2, double a4, double c0, double c4) {
  const double a1 = a0 + a2;
  const double a3 = a2 + a4;
  const double c1 = c0 + a4;
  const double c3 = a0 + c4;
  const double c2 = c1 + c3;
  return {Shape{a0, c0}, Shape{a1, c1}, Shape{a2, c2}, Shape{a3, c3}, Shape{a4, c4}};
}

cd pentagon_pe(const std::array<Shape, 5>& s) {
  return 2.0 * (s[0].c + s[2].a + s[4].c) - 0.5;
}

void require_pentagon_conditions(const std::array<Shape, 5>& s, double tol) {
  for (int i = 0; i < 5; ++i) {
    if (!s[std::size_t(i)].positive()) {
      throw ShapeInfeasible("shape of tetrahedron " + std::to_string(i) + " is not positive");
    }
  }
  const std::array<std::pair<const char*, cd>, 5> rel{{
      {"a1 = a0 + a2", s[1].a - s[0].a - s[2].a},
      {"a3 = a2 + a4", s[3].a - s[2].a - s[4].a},
      {"c1 = c0 + a4", s[1].c - s[0].c - s[4].a},
      {"c3 = a0 + c4", s[3].c - s[0].a - s[4].c},
      {"c2 = c1 + c3", s[2].c - s[1].c - s[3].c},
  }};
  for (const auto& [name, d] : rel) {
    if (std::abs(d) > tol) {
      throw ShapeInfeasible(std::string("relation ") + name + " fails by " +
                            std::to_string(std::abs(d)));
    }
  }
}

IdentityReport check_pentagon(const std::array<Shape, 5>& s, double alpha, double beta,
                              double gamma, double delta, const ModularParameter& p, double tol,
                              bool enforce) {
  if (enforce) require_pentagon_conditions(s);
  auto f = [&](double sigma) {
    return g(s[4], gamma - sigma, alpha + delta - sigma, p, 1e-14) *
           g(s[2], sigma, beta + delta, p, 1e-14) *
           g(s[0], alpha - sigma, beta + gamma - sigma, p, 1e-14);
  };
  const cd lhs = periodic_integral(f, 1e-13, 16, 4096).value;
  const cd rhs = std::exp(-kI * kPi * pentagon_pe(s) / (12.0 * p.hbar)) *
                 g(s[1], alpha, beta, p, 1e-14) * g(s[3], gamma, delta, p, 1e-14);
  return make_report("pentagon",
                     {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"delta", delta},
                      {"P_e", pentagon_pe(s)}},
                     lhs, rhs, tol);
}

IdentityReport check_pentagon_noncompact(const std::array<Shape, 5>& s, double alpha,
                                         double gamma, const ModularParameter& p, double tol,
                                         bool enforce) {
  if (enforce) require_pentagon_conditions(s);
  auto f = [&](cd sigma) {
    return tilde_psi(s[4], gamma - sigma, p) * tilde_psi_prime(s[2], sigma, p) *
           tilde_psi(s[0], alpha - sigma, p);
  };
  const cd lhs = integrate_line(f, 0.0, line_options(1e-13));
  const cd rhs = std::exp(-kI * kPi * pentagon_pe(s) / (12.0 * p.hbar) -
                          2.0 * kPi * kI * alpha * gamma) *
                 tilde_psi(s[1], alpha, p) * tilde_psi(s[3], gamma, p);
  return make_report("pentagon_noncompact",
                     {{"alpha", alpha}, {"gamma", gamma}, {"P_e", pentagon_pe(s)}}, lhs, rhs,
                     tol);
}

// ---- Ramanujan integral and Fourier transforms ----

bool ramanujan_admissible(cd u, cd v, cd w, const ModularParameter& p, double margin) {
  const cd cb = p.c_b;
  return (v + cb).imag() > margin && (cb - u).imag() > margin &&
         (v - u).imag() + margin < w.imag() && w.imag() < -margin;
}

cd ramanujan_numeric(cd u, cd v, cd w, const ModularParameter& p) {
  auto f = [&](cd x) { return std::exp(lphi(x + u, p) - lphi(x + v, p) + 2.0 * kPi * kI * w * x); };
  return integrate_line(f, 0.0, line_options(1e-13));
}

cd ramanujan_closed_1(cd u, cd v, cd w, const ModularParameter& p) {
  const cd cb = p.c_b;
  return std::exp(p.log_zeta_o + lphi(u - v - cb, p) + lphi(w + cb, p) -
                  lphi(u - v + w - cb, p) - 2.0 * kPi * kI * w * (v + cb));
}

cd ramanujan_closed_2(cd u, cd v, cd w, const ModularParameter& p) {
  const cd cb = p.c_b;
  return std::exp(-p.log_zeta_o + lphi(v - u - w + cb, p) - lphi(v - u + cb, p) -
                  lphi(-w - cb, p) - 2.0 * kPi * kI * w * (u - cb));
}

RamanujanValues ramanujan_psi(cd u, cd v, cd w, const ModularParameter& p) {
  if (!ramanujan_admissible(u, v, w, p)) {
    throw DomainError("Ramanujan integral needs Im(v + c_b) > 0, Im(c_b - u) > 0 and "
                      "Im(v - u) < Im w < 0");
  }
  return {ramanujan_numeric(u, v, w, p), ramanujan_closed_1(u, v, w, p),
          ramanujan_closed_2(u, v, w, p)};
}

cd fourier_phib_closed(int sign, cd w, const ModularParameter& p) {
  const cd cb = p.c_b;
  if (sign > 0) return std::exp(p.log_zeta_o - kI * kPi * w * w + lphi(w + cb, p));
  return std::exp(p.log_zeta_o - 2.0 * kPi * kI * w * cb + lphi(w + cb, p));
}

FourierValues fourier_phib(int sign, cd w, const ModularParameter& p) {
  if (!(w.imag() < 0.0)) throw DomainError("Fourier transform of Phi_b needs Im w < 0");
  const cd cb = p.c_b;
  const double s = sign > 0 ? 1.0 : -1.0;
  auto f = [&](cd x) { return std::exp(s * lphi(x, p) + 2.0 * kPi * kI * w * x); };
  // e^{i pi x^2} (sign +) or e^{-i pi x^2} (sign -) dominates on the right
  Contour c;
  c.right_dir = std::exp(kI * (s * kPi / 8.0));
  const cd numeric = contour_integral(f, c);
  cd second;
  if (sign > 0) {
    second = std::exp(-p.log_zeta_o + 2.0 * kPi * kI * w * cb - lphi(-w - cb, p));
  } else {
    second = std::exp(-p.log_zeta_o + kI * kPi * w * w - lphi(-w - cb, p));
  }
  return {numeric, fourier_phib_closed(sign, w, p), second};
}

cd fourier_inverse(int sign, cd x, const ModularParameter& p, double eps) {
  auto f = [&](cd y) {
    const cd cb = p.c_b;
    const cd phase = sign > 0 ? -kI * kPi * y * y : -2.0 * kPi * kI * y * cb;
    return std::exp(p.log_zeta_o + phase + lphi(y + cb, p) - 2.0 * kPi * kI * x * y);
  };
  // The chirp tail is tilted into its decaying sector; the other stays on
  // the line R - i eps.
  Contour c;
  c.origin = cd(0.0, -eps);
  if (sign > 0) {
    c.left_dir = -std::exp(-kI * (kPi / 8.0));
  } else {
    c.right_dir = std::exp(kI * (kPi / 8.0));
  }
  return contour_integral(f, c);
}

// ---- the integrals I_n ----

bool ihg_admissible(const std::vector<cd>& a, const std::vector<cd>& b, cd w,
                    const ModularParameter& p, double margin) {
  if (a.empty() || b.size() + 1 != a.size()) return false;
  const cd cb = p.c_b;
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const cd bj = j < b.size() ? b[j] : cd(0.0);
    if (j < b.size() && !(bj.imag() > margin)) return false;
    if (!((cb - a[j]).imag() > margin)) return false;
    sum += (bj - a[j] - cb).imag();
  }
  const double wm = (w - cb).imag();
  return sum + margin < wm && wm < -margin;
}

cd ihg(const std::vector<cd>& a, const std::vector<cd>& b, cd w, const ModularParameter& p) {
  if (!ihg_admissible(a, b, w, p)) {
    throw DomainError("I_n needs Im b_j > 0, Im(c_b - a_j) > 0 and "
                      "sum Im(b_j - a_j - c_b) < Im(w - c_b) < 0");
  }
  const cd cb = p.c_b;
  // The line sits above the pole at 0 (b_n = +i0) and below every pole of
  // Phi_b(x + a_j).
  double eps = 0.05;
  for (const cd& aj : a) eps = std::min(eps, 0.5 * (cb - aj).imag());
  auto f = [&](cd x) {
    cd l = 2.0 * kPi * kI * x * (w - cb);
    for (std::size_t j = 0; j < a.size(); ++j) {
      const cd bj = j < b.size() ? b[j] : cd(0.0);
      l += lphi(x + a[j], p) - lphi(x + bj - cb, p);
    }
    return std::exp(l);
  };
  return integrate_line(f, cd(0.0, eps), line_options(1e-13));
}

cd ihg1_closed(cd a, cd w, const ModularParameter& p) {
  return std::exp(p.log_zeta_o + lphi(a, p) + lphi(w, p) - lphi(a + w - p.c_b, p));
}

bool ramanbar_admissible(cd a, cd w, const ModularParameter& p, double margin) {
  const cd cb = p.c_b;
  return (w + cb).imag() > margin && (a + w).imag() < -margin && (a + cb).imag() > margin;
}

cd ramanbar_numeric(cd a, cd w, const ModularParameter& p) {
  if (!ramanbar_admissible(a, w, p)) {
    throw DomainError("conjugate Ramanujan integral needs Im(w + c_b) > 0, Im(a + w) < 0 "
                      "and Im(a + c_b) > 0");
  }
  const cd cb = p.c_b;
  const double eps = std::min(0.05, 0.5 * (a + cb).imag());
  auto f = [&](cd x) {
    return std::exp(lphi(x + cb, p) - lphi(x + a, p) - 2.0 * kPi * kI * x * (w + cb));
  };
  return integrate_line(f, cd(0.0, -eps), line_options(1e-13));
}

cd ramanbar_closed(cd a, cd w, const ModularParameter& p) {
  return std::exp(-p.log_zeta_o + lphi(a + w + p.c_b, p) - lphi(a, p) - lphi(w, p));
}

cd saalschutz_closed(cd a, cd b, cd c, cd d, const ModularParameter& p) {
  const cd cb = p.c_b;
  return std::exp(3.0 * p.log_zeta_o + kI * kPi * d * (2.0 * cb - d) + lphi(a, p) + lphi(b, p) +
                  lphi(c, p) + lphi(a - d, p) + lphi(b - d, p) + lphi(c - d, p) -
                  lphi(a + b - d - cb, p) - lphi(b + c - d - cb, p) - lphi(c + a - d - cb, p));
}

cd saalschutz_limit_closed(cd a, cd b, cd d, const ModularParameter& p) {
  const cd cb = p.c_b;
  return std::exp(3.0 * p.log_zeta_o + kI * kPi * d * (2.0 * cb - d) + lphi(a, p) + lphi(b, p) +
                  lphi(a - d, p) + lphi(b - d, p) - lphi(a + b - d - cb, p));
}

bool saalschutz_admissible(cd a, cd b, cd c, cd d, const ModularParameter& p, double margin) {
  const cd e = a + b + c - d - p.c_b;
  return ihg_admissible({a, b, c}, {d, e}, -p.c_b, p, margin);
}

bool saalschutz_limit_admissible(cd a, cd b, cd d, const ModularParameter& p, double margin) {
  return ihg_admissible({a, b}, {d}, -p.c_b, p, margin) && (d - a - b).imag() < -margin;
}

IdentityReport saalschutz_check(cd a, cd b, cd c, cd d, const ModularParameter& p, double tol,
                                double pin_offset) {
  const cd e = a + b + c - d - p.c_b + pin_offset;
  const cd lhs = ihg({a, b, c}, {d, e}, -p.c_b, p);
  const cd rhs = saalschutz_closed(a, b, c, d, p);
  return make_report(pin_offset == 0.0 ? "saalschutz" : "saalschutz_control",
                     {{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"pin_offset", pin_offset}}, lhs,
                     rhs, tol, pin_offset != 0.0);
}

IdentityReport saalschutz_limit_check(cd a, cd b, cd d, const ModularParameter& p, double tol) {
  if (!saalschutz_limit_admissible(a, b, d, p)) {
    throw DomainError("Saalschutz limit needs the I_2 conditions and Im(d - a - b) < 0");
  }
  const cd lhs = ihg({a, b}, {d}, -p.c_b, p);
  return make_report("saalschutz_limit", {{"a", a}, {"b", b}, {"d", d}}, lhs,
                     saalschutz_limit_closed(a, b, d, p), tol);
}

IdentityReport saalschutz_surrogate_check(cd a, cd b, cd d, double c_re,
                                          const ModularParameter& p, double tol) {
  if (!saalschutz_limit_admissible(a, b, d, p)) {
    throw DomainError("Saalschutz limit needs the I_2 conditions and Im(d - a - b) < 0");
  }
  // middle of the band where I_3 stays admissible
  const double h = p.c_b.imag();
  const double c_im = 0.5 * ((h - (a + b - d).imag()) + h);
  const cd c{c_re, c_im};
  const cd e = a + b + c - d - p.c_b;
  const cd lhs = ihg({a, b, c}, {d, e}, -p.c_b, p);
  return make_report("saalschutz_limit_surrogate",
                     {{"a", a}, {"b", b}, {"c", c}, {"d", d}}, lhs,
                     saalschutz_limit_closed(a, b, d, p), tol);
}

IdentityReport heine_check(cd a, cd b, cd c, cd w, const ModularParameter& p, double tol) {
  const cd lhs = ihg({a, b}, {c}, w, p);
  const cd rhs =
      std::exp(lphi(a, p) - lphi(c - b, p)) * ihg({c - b, w}, {a + w}, b, p);
  return make_report("heine", {{"a", a}, {"b", b}, {"c", c}, {"w", w}}, lhs, rhs, tol);
}

IdentityReport euler_heine_check(cd a, cd b, cd c, cd w, const ModularParameter& p, double tol) {
  const cd lhs = ihg({a, b}, {c}, w, p);
  const cd pre = std::exp(lphi(a, p) + lphi(b, p) + lphi(w, p) - lphi(c - b, p) -
                          lphi(c - a, p) - lphi(a + b + w - c, p));
  const cd rhs = pre * ihg({c - a, c - b}, {c}, a + b + w - c, p);
  return make_report("euler_heine", {{"a", a}, {"b", b}, {"c", c}, {"w", w}}, lhs, rhs, tol);
}

// ---- weight symmetries ----

IdentityReport check_fund1(const Shape& s, double x, double y, const ModularParameter& p,
                           double tol) {
  const cd lhs = g(s, x, y, p, 1e-14);
  const cd rhs = g_bar(Shape{s.a, s.b()}, -x, y - x - 0.5, p, 1e-14) * e_i_pi(x / 2.0);
  return make_report("fund1", {{"x", x}, {"y", y}}, lhs, rhs, tol);
}

IdentityReport check_fund2(const Shape& s, double x, double y, const ModularParameter& p,
                           double tol) {
  const cd lhs = g(s, x, y, p, 1e-14);
  const cd rhs = e_i_pi(-1.0 / 6.0) * g_bar(Shape{s.b(), s.c}, x - y - 0.5, -y, p, 1e-14) *
                 e_i_pi(-y / 2.0);
  return make_report("fund2", {{"x", x}, {"y", y}}, lhs, rhs, tol);
}

IdentityReport check_gac_gba(const Shape& s, double x, double y, const ModularParameter& p,
                             double tol) {
  const cd lhs = g(s, x, y, p, 1e-14);
  const cd rhs1 =
      e_i_pi(1.0 / 12.0) * g(Shape{s.b(), s.a}, y - x - 0.5, -x, p, 1e-14) * e_i_pi(x / 2.0);
  const cd rhs2 =
      e_i_pi(-1.0 / 12.0) * g(Shape{s.c, s.b()}, -y, x - y + 0.5, p, 1e-14) * e_i_pi(y / 2.0);
  // report the worse of the two equivalent forms
  const bool first = rel_defect(lhs, rhs1) >= rel_defect(lhs, rhs2);
  return make_report("gac_gba", {{"x", x}, {"y", y}}, lhs, first ? rhs1 : rhs2, tol);
}

IdentityReport check_gac_psicb(const Shape& s, double x, double y, const ModularParameter& p,
                               double tol) {
  const DecayRates r = psi_decay(s, p);
  const DecayingFunction f{[&](double t) { return psi(s, t, p); }, r.left, r.right};
  const cd lhs = wgz(f, x, y, 1e-15);
  const cd rhs = e_i_pi(1.0 / 12.0) * g(Shape{s.b(), s.a}, x, y, p, 1e-14);
  return make_report("gac_psicb", {{"x", x}, {"y", y}}, lhs, rhs, tol);
}

namespace {

constexpr double kGaussK = 1.3;
constexpr double kGaussT0 = 0.2;

cd gaussian(cd t) { return std::exp(-kPi * kGaussK * (t - kGaussT0) * (t - kGaussT0)); }

// Fourier transform with sign +1 (F) or -1 (F^{-1}), computed numerically.
cd numeric_fourier(double x, int sign) {
  auto f = [&](cd t) { return gaussian(t) * std::exp(double(sign) * 2.0 * kPi * kI * x * t); };
  RayOptions o = line_options(1e-14);
  o.panel = 0.5;
  return integrate_ray(f, kGaussT0, 1.0, o) - integrate_ray(f, kGaussT0, -1.0, o);
}

DecayingFunction gaussian_fn(std::function<cd(double)> f) {
  // any positive rate bounds a Gaussian tail from above
  return DecayingFunction{std::move(f), 2.0, 2.0};
}

}  // namespace

IdentityReport check_wgz_intertwining(int which, double x, double y, double tol) {
  const DecayingFunction base = gaussian_fn([](double t) { return gaussian(t); });
  cd lhs, rhs;
  const char* name = "";
  switch (which) {
    case 0:
      name = "wf";
      lhs = wgz(gaussian_fn([](double t) { return numeric_fourier(t, 1); }), x, y);
      rhs = wgz(base, -y, x);
      break;
    case 1:
      name = "wf_inverse";
      lhs = wgz(gaussian_fn([](double t) { return numeric_fourier(t, -1); }), x, y);
      rhs = wgz(base, y, -x);
      break;
    case 2:
      name = "wg";
      lhs = wgz(gaussian_fn([](double t) { return e_i_pi(t * t) * gaussian(t); }), x, y);
      rhs = wgz(base, x, x + y + 0.5) * e_i_pi(-x / 2.0);
      break;
    case 3:
      name = "wg_inverse";
      lhs = wgz(gaussian_fn([](double t) { return e_i_pi(-t * t) * gaussian(t); }), x, y);
      rhs = wgz(base, x, y - x - 0.5) * e_i_pi(x / 2.0);
      break;
    default:
      throw DomainError("WGZ intertwining check index must be in 0..3");
  }
  return make_report(name, {{"x", x}, {"y", y}}, lhs, rhs, tol);
}

IdentityReport check_wgz_roundtrip(double x, double tol) {
  const DecayingFunction base = gaussian_fn([](double t) { return gaussian(t); });
  const QuasiPeriodicSection sec{[&](double u, double v) { return wgz(base, u, v); }};
  return make_report("wgz_roundtrip", {{"x", x}}, wgz_inverse(sec, x, 1e-13), gaussian(x), tol);
}

IdentityReport check_quasi_periodicity(const Shape& s, double x, double y,
                                       const ModularParameter& p, double tol) {
  const QuasiPeriodicSection sec{[&](double u, double v) { return g(s, u, v, p, 1e-14); }};
  const cd v = sec(x, y);
  const double d = quasi_periodicity_defect(sec, x, y);
  // express as a relative defect against |g|
  return make_report("quasi_periodicity", {{"x", x}, {"y", y}}, v + d, v, tol);
}

namespace {

constexpr std::array<double, 6> kSCoef{0, 1, -1, -1, 1, 0};
constexpr std::array<double, 6> kTCoef{-1, 1, 0, 0, 1, -1};

using Perm = std::array<int, 4>;

int perm_parity(const Perm& p) {
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[std::size_t(i)] > p[std::size_t(j)]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

int edge_of(int i, int j) {
  for (int e = 0; e < 6; ++e) {
    const auto& v = kEdgeVertices[std::size_t(e)];
    if ((v[0] == i && v[1] == j) || (v[0] == j && v[1] == i)) return e;
  }
  return -1;
}

// Local edge e of the reordered tetrahedron sits on original edge
// perm_edge(pi, e).
int perm_edge(const Perm& pi, int e) {
  const auto& v = kEdgeVertices[std::size_t(e)];
  return edge_of(pi[std::size_t(v[0])], pi[std::size_t(v[1])]);
}

cd angle_on(const Shape& s, int e) {
  if (e == 0 || e == 5) return s.a;
  if (e == 2 || e == 3) return s.c;
  return s.b();
}

struct OrbitState {
  Shape shape;
  int sign = 1;
  cd c = 1.0;                  // constant factor
  std::array<double, 6> l{};   // e^{i pi l.x}
  std::array<double, 6> d{};   // argument shift of the base weight
  bool known = false;
};

}  // namespace

IdentityReport check_symmetry_orbit(const Shape& s, const TetEdgeValues& x,
                                    const ModularParameter& p, double tol) {
  std::vector<Perm> perms;
  Perm id{0, 1, 2, 3};
  do perms.push_back(id);
  while (std::next_permutation(id.begin(), id.end()));
  auto index = [&](const Perm& q) {
    return int(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };

  std::vector<OrbitState> st(perms.size());
  st[0] = OrbitState{s, 1, 1.0, {}, {}, true};

  // generators: vertex transpositions (01), (12), (23)
  const std::array<std::array<int, 2>, 3> gens{{{0, 1}, {1, 2}, {2, 3}}};
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int k = queue[qi];
    const Perm& pi = perms[std::size_t(k)];
    const OrbitState& cur = st[std::size_t(k)];
    for (const auto& gen : gens) {
      Perm next = pi;
      std::swap(next[std::size_t(gen[0])], next[std::size_t(gen[1])]);
      const int nk = index(next);
      if (st[std::size_t(nk)].known) continue;
      // Rule on the current tetrahedron's own edge values y:
      // W'(y) = K e^{i pi ell.y} W(y + dl).
      cd K = 1.0;
      std::array<double, 6> ell{}, dl{};
      Shape ns;
      const double sg = double(cur.sign);
      if (gen[0] == 1) {
        K = e_i_pi(sg / 6.0);
        for (int e = 0; e < 6; ++e) ell[std::size_t(e)] = 0.5 * kTCoef[std::size_t(e)];
        dl[2] = -0.5 * sg;
        ns = Shape{cur.shape.b(), cur.shape.c};
      } else {
        for (int e = 0; e < 6; ++e) ell[std::size_t(e)] = 0.5 * kSCoef[std::size_t(e)];
        dl[0] = 0.5 * sg;
        ns = Shape{cur.shape.a, cur.shape.b()};
      }
      // Move ell and dl from local edges of pi onto original edges.
      OrbitState nx;
      nx.shape = ns;
      nx.sign = -cur.sign;
      nx.l = cur.l;
      nx.d = cur.d;
      std::array<double, 6> dt{}, lt{};
      for (int e = 0; e < 6; ++e) {
        const int oe = perm_edge(pi, e);
        dt[std::size_t(oe)] += dl[std::size_t(e)];
        lt[std::size_t(oe)] += ell[std::size_t(e)];
      }
      double ld = 0.0;
      for (int e = 0; e < 6; ++e) {
        ld += cur.l[std::size_t(e)] * dt[std::size_t(e)];
        nx.l[std::size_t(e)] += lt[std::size_t(e)];
        nx.d[std::size_t(e)] += dt[std::size_t(e)];
      }
      nx.c = K * cur.c * e_i_pi(ld);
      nx.known = true;
      st[std::size_t(nk)] = nx;
      queue.push_back(nk);
    }
  }

  auto reordered = [&](const Perm& pi, const TetEdgeValues& v) {
    TetEdgeValues y{};
    for (int e = 0; e < 6; ++e) y[std::size_t(e)] = v[std::size_t(perm_edge(pi, e))];
    return y;
  };

  double worst = -1.0;
  cd worst_l, worst_r;
  double shape_err = 0.0;
  for (std::size_t k = 0; k < perms.size(); ++k) {
    const Perm& pi = perms[k];
    // direct: the angles follow the vertex reordering
    const Shape direct_shape{angle_on(s, perm_edge(pi, 0)), angle_on(s, perm_edge(pi, 2))};
    const int direct_sign = perm_parity(pi);
    shape_err = std::max(shape_err, std::abs(direct_shape.a - st[k].shape.a) +
                                        std::abs(direct_shape.c - st[k].shape.c) +
                                        double(std::abs(direct_sign - st[k].sign)));
    const cd direct =
        boltzmann_weight(direct_shape, direct_sign, reordered(pi, x), p, 1e-14);
    TetEdgeValues xs = x;
    double lx = 0.0;
    for (int e = 0; e < 6; ++e) {
      xs[std::size_t(e)] += st[k].d[std::size_t(e)];
      lx += st[k].l[std::size_t(e)] * x[std::size_t(e)];
    }
    const cd predicted = st[k].c * e_i_pi(lx) * boltzmann_weight(s, 1, xs, p, 1e-14);
    const double d = rel_defect(predicted, direct);
    if (d > worst) {
      worst = d;
      worst_l = predicted;
      worst_r = direct;
    }
  }
  if (shape_err > 1e-14) worst_l = worst_r * 2.0;  // bookkeeping of shapes went wrong
  std::vector<std::pair<std::string, cd>> params;
  for (int e = 0; e < 6; ++e) {
    const auto& v = kEdgeVertices[std::size_t(e)];
    params.emplace_back("x" + std::to_string(v[0]) + std::to_string(v[1]), x[std::size_t(e)]);
  }
  return make_report("symmetry_orbit", std::move(params), worst_l, worst_r, tol);
}

std::vector<IdentityReport> check_symmetries(const Shape& s, int samples,
                                             const ModularParameter& p, double tol,
                                             std::uint64_t seed) {
  Sampler rng(seed);
  std::vector<IdentityReport> out;
  for (int i = 0; i < samples; ++i) {
    const double x = rng.real(0.0, 1.0);
    const double y = rng.real(0.0, 1.0);
    out.push_back(check_fund1(s, x, y, p, tol));
    out.push_back(check_fund2(s, x, y, p, tol));
    out.push_back(check_gac_gba(s, x, y, p, tol));
    out.push_back(check_gac_psicb(s, x, y, p, tol));
  }
  for (auto& r : out) r.seed = seed;
  return out;
}

// ---- suites ----

namespace {

using Task = std::function<std::vector<IdentityReport>(std::uint64_t)>;

IdentityReport failed_report(const std::string& name, const std::exception& e) {
  IdentityReport r;
  r.identity = name;
  r.params.emplace_back("error", 0.0);
  r.defect = INFINITY;
  r.pass = false;
  r.lhs = r.rhs = 0.0;
  (void)e;
  return r;
}

void add(std::vector<std::pair<std::string, Task>>& tasks, std::string name, Task t) {
  tasks.emplace_back(std::move(name), std::move(t));
}

std::uint64_t task_seed(std::uint64_t seed, std::size_t k) {
  std::seed_seq ss{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(k)};
  std::array<std::uint64_t, 1> out{};
  ss.generate(reinterpret_cast<std::uint32_t*>(out.data()),
              reinterpret_cast<std::uint32_t*>(out.data() + 1));
  return out[0];
}

// Reference shapes: the pentagon set with P_e = 0 and one with P_e = 0.1.
std::array<Shape, 5> pentagon_set(bool nonzero_pe) {
  return nonzero_pe ? pentagon_shapes(0.05, 0.05, 0.05, 0.1, 0.15)
                    : pentagon_shapes(0.05, 0.05, 0.05, 0.1, 0.1);
}

std::array<Shape, 5> broken(std::array<Shape, 5> s) {
  s[2].c += 0.01;
  return s;
}

void qdilog_tasks(std::vector<std::pair<std::string, Task>>& tasks, int n) {
  for (double b : {1.0, 0.8, 1.2}) {
    add(tasks, "inversion", [b, n](std::uint64_t sd) {
      const ModularParameter p = make_parameter(b);
      Sampler rng(sd);
      std::vector<IdentityReport> out;
      for (int i = 0; i < n; ++i) {
        const double h = 0.9 * p.strip;
        out.push_back(check_inversion(rng.complex(-3, 3, -h, h), p));
      }
      return out;
    });
  }
  add(tasks, "shift", [n](std::uint64_t sd) {
    std::vector<IdentityReport> out;
    for (double b : {1.0, 0.8}) {
      const ModularParameter p = make_parameter(b);
      Sampler rng(sd);
      for (int i = 0; i < n; ++i) {
        const cd z = rng.complex(-2, 2, -0.4, 0.4);
        out.push_back(check_shift(z, false, p));
        out.push_back(check_shift(z, true, p));
      }
    }
    return out;
  });
  add(tasks, "unitarity", [n](std::uint64_t sd) {
    std::vector<IdentityReport> out;
    for (cd b : {cd(1.0), cd(0.7), std::exp(kI * (kPi / 5.0))}) {
      const ModularParameter p = make_parameter(b);
      Sampler rng(sd);
      for (int i = 0; i < n; ++i) {
        const double h = 0.4 * p.strip;
        out.push_back(check_unitarity(rng.complex(-3, 3, -h, h), p));
      }
    }
    return out;
  });
  add(tasks, "product_oracle", [n](std::uint64_t sd) {
    const ModularParameter p = make_parameter(std::exp(kI * (kPi / 6.0)));
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < n; ++i) {
      const double h = 0.8 * p.strip;
      out.push_back(check_product_oracle(rng.complex(-1.5, 1.5, -h, h), p));
    }
    return out;
  });
}

IdentityReport quasiclassical_report() {
  const double x = 0.5;
  const QuasiclassicalFit fit = quasiclassical_fit(x, {0.2, 0.1, 0.05});
  const cd li2 = dilog_real(-std::exp(x));
  IdentityReport r = make_report(
      "quasiclassical",
      {{"x", x}, {"b", fit.b.back()}, {"slope", fit.slope}},
      li2 + fit.defect.back(), li2, 1e-6);
  r.pass = r.pass && fit.slope >= 3.5;
  return r;
}

void pentagon_tasks(std::vector<std::pair<std::string, Task>>& tasks, int n) {
  const ModularParameter p = make_parameter(1.0);
  add(tasks, "pentagon", [p, n](std::uint64_t sd) {
    std::vector<IdentityReport> out;
    out.push_back(check_pentagon(pentagon_set(false), 0, 0, 0, 0, p));
    out.push_back(check_pentagon(pentagon_set(true), 0, 0, 0, 0, p));
    Sampler rng(sd);
    for (int i = 0; i < n; ++i) {
      const double a = rng.real(0, 1), b = rng.real(0, 1), c = rng.real(0, 1),
                   d = rng.real(0, 1);
      out.push_back(check_pentagon(pentagon_set(i % 2 == 1), a, b, c, d, p));
    }
    return out;
  });
  add(tasks, "pentagon_noncompact", [p, n](std::uint64_t sd) {
    std::vector<IdentityReport> out;
    out.push_back(check_pentagon_noncompact(pentagon_set(false), 0, 0, p));
    out.push_back(check_pentagon_noncompact(pentagon_set(false), 0.3, -0.2, p));
    out.push_back(check_pentagon_noncompact(pentagon_set(true), 0.3, -0.2, p));
    Sampler rng(sd);
    for (int i = 0; i < n / 2; ++i) {
      out.push_back(check_pentagon_noncompact(pentagon_set(false), rng.real(-1, 1),
                                              rng.real(-1, 1), p));
    }
    return out;
  });
  add(tasks, "pentagon_control", [p](std::uint64_t) {
    IdentityReport r1 = check_pentagon(broken(pentagon_set(false)), 0, 0, 0, 0, p, 1e-3, false);
    IdentityReport r2 = check_pentagon_noncompact(broken(pentagon_set(false)), 0, 0, p, 1e-3,
                                                  false);
    for (auto* r : {&r1, &r2}) {
      r->identity += "_control";
      r->control = true;
      r->pass = r->defect > r->tol;
    }
    return std::vector<IdentityReport>{r1, r2};
  });
}

// Admissible samples for the hypergeometric-type checks.
struct Ramanujan3 {
  cd u, v, w;
};

Ramanujan3 sample_ramanujan(Sampler& rng, const ModularParameter& p) {
  return rejection_sample(
      [&]() {
        return Ramanujan3{rng.complex(-1, 1, -0.45, 0.45), rng.complex(-1, 1, -0.45, 0.45),
                          rng.complex(-0.5, 0.5, -0.9, 0.0)};
      },
      [&](const Ramanujan3& t) { return ramanujan_admissible(t.u, t.v, t.w, p, 0.1); },
      "the Ramanujan integral");
}

std::array<cd, 4> sample_heine(Sampler& rng, const ModularParameter& p, bool euler) {
  return rejection_sample(
      [&]() {
        return std::array<cd, 4>{rng.complex(-0.5, 0.5, -1.0, 1.0),
                                 rng.complex(-0.5, 0.5, -1.0, 1.0),
                                 rng.complex(-0.5, 0.5, -1.0, 1.5),
                                 rng.complex(-0.5, 0.5, -1.0, 1.5)};
      },
      [&](const std::array<cd, 4>& s) {
        const cd a = s[0], b = s[1], c = s[2], w = s[3];
        if (!ihg_admissible({a, b}, {c}, w, p, 0.1)) return false;
        if (euler) return ihg_admissible({c - a, c - b}, {c}, a + b + w - c, p, 0.1);
        return ihg_admissible({c - b, w}, {a + w}, b, p, 0.1);
      },
      euler ? "Euler-Heine" : "Heine");
}

std::array<cd, 4> sample_saalschutz(Sampler& rng, const ModularParameter& p) {
  return rejection_sample(
      [&]() {
        return std::array<cd, 4>{
            rng.complex(-0.5, 0.5, -0.5, 1.0), rng.complex(-0.5, 0.5, -0.5, 1.0),
            rng.complex(-0.5, 0.5, -0.5, 1.0), rng.complex(-0.5, 0.5, -0.5, 1.0)};
      },
      [&](const std::array<cd, 4>& s) {
        return saalschutz_admissible(s[0], s[1], s[2], s[3], p, 0.1);
      },
      "Saalschutz");
}

std::array<cd, 3> sample_saalschutz_limit(Sampler& rng, const ModularParameter& p) {
  return rejection_sample(
      [&]() {
        return std::array<cd, 3>{rng.complex(-0.5, 0.5, -0.5, 1.0),
                                 rng.complex(-0.5, 0.5, -0.5, 1.0),
                                 rng.complex(-0.5, 0.5, -0.5, 1.0)};
      },
      [&](const std::array<cd, 3>& s) {
        return saalschutz_limit_admissible(s[0], s[1], s[2], p, 0.1);
      },
      "the Saalschutz limit");
}

void appendix_tasks(std::vector<std::pair<std::string, Task>>& tasks, int n) {
  const ModularParameter p = make_parameter(1.0);
  add(tasks, "ramanujan", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < n; ++i) {
      const Ramanujan3 t = sample_ramanujan(rng, p);
      const RamanujanValues v = ramanujan_psi(t.u, t.v, t.w, p);
      const std::vector<std::pair<std::string, cd>> prm{{"u", t.u}, {"v", t.v}, {"w", t.w}};
      out.push_back(make_report("ramanujan", prm, v.numeric, v.closed_form_1, 1e-7));
      out.push_back(make_report("ramanujan_closed_forms", prm, v.closed_form_1,
                                v.closed_form_2, 1e-12));
      // I_1 form of the same integral
      const cd via_i1 = std::exp(-2.0 * kPi * kI * t.w * (t.v + p.c_b)) *
                        ihg({t.u - t.v - p.c_b}, {}, t.w + p.c_b, p);
      out.push_back(make_report("raman", prm, via_i1, v.numeric, 1e-7));
    }
    return out;
  });
  add(tasks, "ramanujan_control", [p](std::uint64_t sd) {
    Sampler rng(sd);
    const Ramanujan3 t = sample_ramanujan(rng, p);
    const cd shifted = ramanujan_numeric(t.u + 0.01, t.v, t.w, p);
    return std::vector<IdentityReport>{
        make_report("ramanujan_control", {{"u", t.u}, {"v", t.v}, {"w", t.w}, {"du", 0.01}},
                    shifted, ramanujan_closed_1(t.u, t.v, t.w, p), 1e-3, true)};
  });
  add(tasks, "fourier", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    std::vector<cd> ws{cd(0.0, -0.1)};
    for (int i = 1; i < n; ++i) ws.push_back(rng.complex(-0.5, 0.5, -0.6, -0.05));
    for (const cd& w : ws) {
      for (int sign : {1, -1}) {
        const FourierValues v = fourier_phib(sign, w, p);
        const std::string name = sign > 0 ? "fourier_plus" : "fourier_minus";
        out.push_back(make_report(name, {{"w", w}}, v.numeric, v.closed_form, 1e-7));
        out.push_back(make_report(name + "_closed_forms", {{"w", w}}, v.closed_form,
                                  v.closed_form_2, 1e-12));
      }
    }
    return out;
  });
  add(tasks, "fourier_inverse", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    std::vector<double> xs{0.2};
    for (int i = 1; i < std::max(1, n / 2); ++i) xs.push_back(rng.real(-1.0, 1.0));
    for (double x : xs) {
      out.push_back(make_report("finv_plus", {{"x", x}}, fourier_inverse(1, x, p), phib(x, p),
                                1e-6));
      out.push_back(make_report("finv_minus", {{"x", x}}, fourier_inverse(-1, x, p),
                                1.0 / phib(x, p), 1e-6));
    }
    return out;
  });
  add(tasks, "fourier1_limit", [p](std::uint64_t) {
    const cd w{0.0, -0.1};
    const cd target = fourier_phib_closed(1, w, p);
    std::vector<IdentityReport> out;
    cd prev = 0.0;
    for (double depth : {5.0, 10.0}) {
      const cd v{-depth, -0.3};
      const cd val = ramanujan_numeric(0.0, v, w, p);
      out.push_back(make_report("fourier1_limit", {{"v", v}, {"w", w}}, val, target, 1e-4));
      prev = depth == 5.0 ? val : prev;
      if (depth == 10.0) {
        out.push_back(make_report("fourier1_limit_stability", {{"w", w}}, val, prev, 1e-4));
      }
    }
    return out;
  });
  add(tasks, "ihg1", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < n; ++i) {
      const auto aw = rejection_sample(
          [&]() {
            return std::array<cd, 2>{rng.complex(-0.5, 0.5, -1.0, 1.0),
                                     rng.complex(-0.5, 0.5, -1.0, 1.0)};
          },
          [&](const std::array<cd, 2>& s) { return ihg_admissible({s[0]}, {}, s[1], p, 0.1); },
          "I_1");
      out.push_back(make_report("ihg1", {{"a", aw[0]}, {"w", aw[1]}}, ihg({aw[0]}, {}, aw[1], p),
                                ihg1_closed(aw[0], aw[1], p), 1e-7));
    }
    return out;
  });
  add(tasks, "ramanbar", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < n; ++i) {
      const auto aw = rejection_sample(
          [&]() {
            return std::array<cd, 2>{rng.complex(-0.5, 0.5, -1.0, 1.0),
                                     rng.complex(-0.5, 0.5, -1.0, 1.0)};
          },
          [&](const std::array<cd, 2>& s) {
            return ramanbar_admissible(s[0], s[1], p, 0.1) &&
                   ihg_admissible({-s[0]}, {}, -s[1], p, 0.1);
          },
          "the conjugate Ramanujan integral");
      const cd a = aw[0], w = aw[1];
      const cd num = ramanbar_numeric(a, w, p);
      out.push_back(make_report("ramanbar", {{"a", a}, {"w", w}}, num, ramanbar_closed(a, w, p),
                                1e-7));
      const cd via_i1 =
          std::exp(2.0 * kPi * kI * (a + p.c_b) * (w + p.c_b)) * ihg({-a}, {}, -w, p);
      out.push_back(make_report("ramanbar_ihg1", {{"a", a}, {"w", w}}, via_i1, num, 1e-7));
    }
    return out;
  });
  add(tasks, "heine", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < std::max(1, n / 2); ++i) {
      const auto s = sample_heine(rng, p, false);
      out.push_back(heine_check(s[0], s[1], s[2], s[3], p));
    }
    return out;
  });
  add(tasks, "euler_heine", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < std::max(1, n / 2); ++i) {
      const auto s = sample_heine(rng, p, true);
      out.push_back(euler_heine_check(s[0], s[1], s[2], s[3], p));
    }
    return out;
  });
  add(tasks, "saalschutz", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < std::max(1, n / 2); ++i) {
      const auto s = sample_saalschutz(rng, p);
      out.push_back(saalschutz_check(s[0], s[1], s[2], s[3], p));
    }
    return out;
  });
  add(tasks, "saalschutz_control", [p](std::uint64_t sd) {
    Sampler rng(sd);
    const auto s = sample_saalschutz(rng, p);
    return std::vector<IdentityReport>{saalschutz_check(s[0], s[1], s[2], s[3], p, 1e-3, 0.01)};
  });
  add(tasks, "saalschutz_limit", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < std::max(1, n / 2); ++i) {
      const auto s = sample_saalschutz_limit(rng, p);
      out.push_back(saalschutz_limit_check(s[0], s[1], s[2], p));
      if (i == 0) {
        const IdentityReport r4 = saalschutz_surrogate_check(s[0], s[1], s[2], -4.0, p);
        const IdentityReport r8 = saalschutz_surrogate_check(s[0], s[1], s[2], -8.0, p);
        out.push_back(r4);
        out.push_back(r8);
        out.push_back(make_report("saalschutz_limit_stability",
                                  {{"a", s[0]}, {"b", s[1]}, {"d", s[2]}}, r8.lhs, r4.lhs,
                                  1e-4));
      }
    }
    return out;
  });
  add(tasks, "quasiclassical",
      [](std::uint64_t) { return std::vector<IdentityReport>{quasiclassical_report()}; });
}

void symmetry_tasks(std::vector<std::pair<std::string, Task>>& tasks, int n) {
  const ModularParameter p = make_parameter(1.0);
  add(tasks, "weight_symmetries", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    const Shape s{rng.real(0.05, 0.2), rng.real(0.05, 0.2)};
    return check_symmetries(s, n, p, 1e-9, 0);
  });
  add(tasks, "wgz_intertwining", [n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    for (int i = 0; i < n; ++i) {
      const double x = rng.real(0, 1), y = rng.real(0, 1);
      for (int k = 0; k < 4; ++k) out.push_back(check_wgz_intertwining(k, x, y));
    }
    return out;
  });
  add(tasks, "wgz", [p, n](std::uint64_t sd) {
    Sampler rng(sd);
    std::vector<IdentityReport> out;
    const Shape s{0.1, 0.15};
    for (int i = 0; i < std::max(1, n / 2); ++i) {
      const double x = rng.real(-1, 1), y = rng.real(0, 1);
      out.push_back(check_wgz_roundtrip(x));
      out.push_back(check_quasi_periodicity(s, x, y, p));
    }
    return out;
  });
  add(tasks, "symmetry_orbit", [p](std::uint64_t sd) {
    Sampler rng(sd);
    TetEdgeValues x{};
    for (auto& v : x) v = rng.real(0, 1);
    return std::vector<IdentityReport>{check_symmetry_orbit(Shape{0.1, 0.15}, x, p)};
  });
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"qdilog", "pentagon", "appendix", "symmetries", "all"};
}

std::vector<IdentityReport> run_suite(const std::string& name, std::uint64_t seed, int samples,
                                      int threads) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ValidationError("unknown suite '" + name +
                          "' (expected qdilog, pentagon, appendix, symmetries or all)");
  }
  if (samples < 0) throw ValidationError("samples must be non-negative");
  if (samples == 0) return {};

  std::vector<std::pair<std::string, Task>> tasks;
  const bool all = name == "all";
  if (all || name == "qdilog") qdilog_tasks(tasks, samples);
  if (all || name == "pentagon") pentagon_tasks(tasks, samples);
  if (all || name == "appendix") appendix_tasks(tasks, samples);
  if (all || name == "symmetries") symmetry_tasks(tasks, samples);

  // Each task reseeds its sampler from (seed, task index) so results do not
  // depend on scheduling.
  std::vector<std::vector<IdentityReport>> results(tasks.size());
  auto run = [&](std::size_t k) {
    const std::uint64_t s = task_seed(seed, k);
    try {
      results[k] = tasks[k].second(s);
    } catch (const std::exception& e) {
      results[k] = {failed_report(tasks[k].first, e)};
    }
  };
  const int nt = std::max(1, std::min<int>(resolve_threads(threads), int(tasks.size())));
  if (nt == 1) {
    for (std::size_t k = 0; k < tasks.size(); ++k) run(k);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = std::size_t(w); k < tasks.size(); k += std::size_t(nt)) run(k);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<IdentityReport> out;
  for (auto& r : results) {
    for (auto& x : r) {
      x.seed = seed;
      out.push_back(std::move(x));
    }
  }
  return out;
}

}  // namespace tqft
