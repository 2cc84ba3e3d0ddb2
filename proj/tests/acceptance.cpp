// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "tqft/identities.hpp"
#include "tqft/integrator.hpp"

using namespace tqft;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  cd complex(double re_lo, double re_hi, double im_lo, double im_hi) {
    const double re = real(re_lo, re_hi);
    return {re, real(im_lo, im_hi)};
  }
};

// Max defect over the reports; a throwing or non-finite check counts as infinity.
double max_defect(const std::vector<IdentityReport>& rs) {
  double m = 0.0;
  for (const auto& r : rs) m = std::max(m, std::isfinite(r.defect) ? r.defect : INFINITY);
  return m;
}

Triangulation load(const std::string& name) {
  std::ifstream in(std::string(TQFT_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_triangulation(ss.str());
}

void set_state(Triangulation& X, const std::vector<double>& vals) {
  X.boundary_state.clear();
  std::vector<int> done(std::size_t(X.num_edge_classes()), 0);
  std::size_t k = 0;
  for (int t = 0; t < int(X.tetrahedra().size()); ++t) {
    for (int e = 0; e < 6; ++e) {
      const int c = X.edge_class(t, e);
      if (done[std::size_t(c)] || !X.edge_classes()[std::size_t(c)].boundary) continue;
      done[std::size_t(c)] = 1;
      X.boundary_state.push_back(
          {X.tetrahedra()[std::size_t(t)].id, kEdgeVertices[std::size_t(e)], vals[k++]});
    }
  }
}

const std::vector<IdentityReport>& appendix_reports() {
  static const std::vector<IdentityReport> rs = run_suite("appendix", 1, 10, 0);
  return rs;
}

std::vector<IdentityReport> pick(const std::vector<std::string>& names) {
  std::vector<IdentityReport> out;
  for (const auto& r : appendix_reports()) {
    if (std::find(names.begin(), names.end(), r.identity) != names.end()) out.push_back(r);
  }
  return out;
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<IdentityReport> rs;
  for (double b : {1.0, 0.8, 1.2}) {
    const ModularParameter p = make_parameter(b);
    Rng rng(101);
    const double h = 0.9 * p.strip;
    for (int i = 0; i < 200; ++i) rs.push_back(check_inversion(rng.complex(-3, 3, -h, h), p));
  }
  const double d = max_defect(rs), t = seconds_since(t0);
  return {d <= 1e-9 && t < 10.0, fmt("max defect %.2e over 600 points, %.2f s", d, t)};
}

Outcome c2() {
  std::vector<IdentityReport> rs;
  for (double b : {1.0, 0.8, 1.2}) {
    const ModularParameter p = make_parameter(b);
    Rng rng(202);
    for (int i = 0; i < 200; ++i) {
      const cd z = rng.complex(-2, 2, -0.4, 0.4);
      rs.push_back(check_shift(z, false, p));
      rs.push_back(check_shift(z, true, p));
    }
  }
  const double d = max_defect(rs);
  return {d <= 1e-9, fmt("max defect %.2e over 200 points per b, both periods", d)};
}

Outcome c3() {
  double worst = 0.0;
  for (double b : {1.0, 0.8, 1.2}) {
    const ModularParameter p = make_parameter(b);
    for (int i = 0; i <= 400; ++i) {
      const double x = -5.0 + 0.025 * i;
      worst = std::max(worst, std::abs(std::abs(phib(x, p)) - 1.0));
    }
  }
  return {worst <= 1e-10, fmt("max | |Phi_b(x)| - 1 | = %.2e on 401 grid points per b", worst)};
}

Outcome c4() {
  const ModularParameter p = make_parameter(std::exp(kI * (kPi / 6.0)));
  Rng rng(404);
  std::vector<IdentityReport> rs;
  const double h = 0.8 * p.strip;
  for (int i = 0; i < 50; ++i) rs.push_back(check_product_oracle(rng.complex(-1.5, 1.5, -h, h), p));
  const double d = max_defect(rs);
  return {d <= 1e-8, fmt("max relative defect %.2e at 50 points", d)};
}

Outcome c5() {
  const auto t0 = std::chrono::steady_clock::now();
  const QuasiclassicalFit f = quasiclassical_fit(0.5, {0.2, 0.1, 0.05});
  const double t = seconds_since(t0);
  return {f.slope >= 3.5 && t < 30.0,
          fmt("log-log slope %.3f, ", f.slope) + fmt("%.2f s", t)};
}

Outcome c6() {
  const auto rs = pick({"ramanujan", "ramanujan_closed_forms"});
  const auto main = pick({"ramanujan"});
  const double d = max_defect(rs);
  return {d <= 1e-7 && main.size() >= 10,
          fmt("max defect %.2e at %.0f sampled triples", d, double(main.size()))};
}

Outcome c7() {
  const auto f = pick({"fourier_plus", "fourier_minus"});
  const auto inv = pick({"finv_plus", "finv_minus"});
  const double df = max_defect(f), di = max_defect(inv);
  return {!f.empty() && !inv.empty() && df <= 1e-6 && di <= 1e-6,
          fmt("Fourier %.2e, inverse %.2e", df, di)};
}

Outcome c8() {
  const auto exact = pick({"saalschutz", "saalschutz_limit", "euler_heine", "heine"});
  const auto surr = pick({"saalschutz_limit_surrogate", "saalschutz_limit_stability"});
  const double de = max_defect(exact), ds = max_defect(surr);
  return {!exact.empty() && !surr.empty() && de <= 1e-6 && ds <= 1e-4,
          fmt("identities %.2e, limit surrogates %.2e", de, ds)};
}

Outcome c9() {
  const ModularParameter p = make_parameter(1.0);
  Rng rng(909);
  std::map<std::string, double> worst;
  for (int i = 0; i < 50; ++i) {
    const Shape s{rng.real(0.05, 0.2), rng.real(0.05, 0.2)};
    const double x = rng.real(0, 1), y = rng.real(0, 1);
    for (const IdentityReport& r : {check_wgz_intertwining(0, x, y), check_wgz_intertwining(2, x, y),
                                    check_fund1(s, x, y, p), check_fund2(s, x, y, p)}) {
      worst[r.identity] = std::max(worst[r.identity], std::isfinite(r.defect) ? r.defect : INFINITY);
    }
  }
  double d = 0.0;
  std::string detail;
  for (const auto& [k, v] : worst) {
    d = std::max(d, v);
    detail += k + " " + fmt("%.2e", v) + (k == worst.rbegin()->first ? "" : ", ");
  }
  return {worst.size() == 4 && d <= 1e-9, detail + " at 50 points each"};
}

Outcome c10() {
  const ModularParameter p = make_parameter(1.0);
  Rng rng(1010);
  std::vector<IdentityReport> rs;
  for (int i = 0; i < 20; ++i) {
    const Shape s{rng.real(0.05, 0.2), rng.real(0.05, 0.2)};
    const double x = rng.real(-1, 1), y = rng.real(0, 1);
    rs.push_back(check_quasi_periodicity(s, x, y, p));
    rs.push_back(check_wgz_roundtrip(x));
  }
  const double d = max_defect(rs);
  return {d <= 1e-10, fmt("max defect %.2e at 20 points", d)};
}

std::array<Shape, 5> acceptance_pentagon() { return pentagon_shapes(0.05, 0.05, 0.05, 0.1, 0.1); }

Outcome c11() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModularParameter p = make_parameter(1.0);
  const auto s = acceptance_pentagon();
  std::vector<IdentityReport> rs{check_pentagon(s, 0, 0, 0, 0, p)};
  Rng rng(1111);
  for (int i = 0; i < 10; ++i) {
    const double a = rng.real(0, 1), b = rng.real(0, 1), c = rng.real(0, 1), d = rng.real(0, 1);
    rs.push_back(check_pentagon(s, a, b, c, d, p));
  }
  const double d = max_defect(rs), t = seconds_since(t0), pe = std::abs(pentagon_pe(s));
  return {d <= 1e-6 && pe < 1e-12 && t < 60.0,
          fmt("max defect %.2e over 11 evaluations, %.2f s", d, t)};
}

Outcome c12() {
  const ModularParameter p = make_parameter(1.0);
  const Triangulation X0 = load("bipyramid2.json");
  Rng rng(1212);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    std::vector<double> vals(9);
    for (double& v : vals) v = rng.real(0, 1);
    const int sign = k % 2 == 0 ? 1 : -1;
    Triangulation X = Triangulation::build(
        {{"A", sign, {0.1, 0.15}}, {"B", sign, {0.1, 0.15}}}, X0.gluings(), 0.0);
    set_state(X, vals);
    MoveSpec mv;
    mv.face = {0, 2};
    worst = std::max(worst, pachner_invariance_check(X, mv, p).defect);
  }
  Triangulation U = Triangulation::build({{"A", 1, {0.1, 0.15}}, {"B", 1, {0.1, 0.2}}},
                                         X0.gluings(), 0.0);
  set_state(U, {0.13, 0.71, 0.42, 0.05, 0.88, 0.27, 0.6, 0.33, 0.91});
  MoveSpec mv;
  mv.face = {0, 2};
  mv.a0 = cd(0.05);
  const InvarianceReport with = pachner_invariance_check(U, mv, p, {}, true);
  const InvarianceReport without = pachner_invariance_check(U, mv, p, {}, false);
  const bool ok = worst <= 1e-5 && std::abs(with.move.pe - 0.1) < 1e-12 && with.defect <= 1e-5 &&
                  without.defect >= 1e-2;
  return {ok, fmt("10 states max %.2e; P_e = 0.1 with level %.2e, ", worst, with.defect) +
                  fmt("without %.2e", without.defect)};
}

Outcome c13() {
  const ModularParameter p = make_parameter(1.0);
  const Triangulation Y = load("bipyramid3.json");
  const int e = Y.internal_edges()[0];
  const double up = contour_shift_check(Y, e, 0.05, p);
  const double down = contour_shift_check(Y, e, -0.05, p);
  return {std::max(up, down) <= 1e-8, fmt("shift +0.05i %.2e, -0.05i %.2e", up, down)};
}

Outcome c14() {
  const ModularParameter p = make_parameter(1.0);
  const cd y{0.0, -0.5};
  const cd pole = p.c_b + kI;  // double pole of phi_b at b = 1
  double lo = INFINITY, hi = 0.0, phi_first = 0.0, phi_last = 0.0;
  for (double d : {0.1, 0.03, 0.01, 0.003, 0.001}) {
    const cd x = pole + d;
    const cd phi = phi_wgz(x, y, p);
    const double prod = std::abs(phi * chi(x, y, p));
    lo = std::min(lo, prod);
    hi = std::max(hi, prod);
    if (d == 0.1) phi_first = std::abs(phi);
    phi_last = std::abs(phi);
  }
  const double spread = hi / lo, growth = phi_last / phi_first;
  return {spread < 10.0 && growth > 1e3,
          fmt("|phi chi| varies by %.2fx, |phi| grows by %.2ex", spread, growth)};
}

Outcome c15() {
  const ModularParameter p = make_parameter(1.0);
  const auto ram = pick({"ramanujan_control"});
  const auto saal = pick({"saalschutz_control"});
  auto s = acceptance_pentagon();
  s[2].c += 0.01;
  const IdentityReport pent = check_pentagon(s, 0, 0, 0, 0, p, 1e-3, false);
  const double dr = max_defect(ram), ds = max_defect(saal);
  const bool ok = !ram.empty() && !saal.empty() && dr > 1e-3 && ds > 1e-3 && pent.defect > 1e-3;
  return {ok, fmt("perturbed Ramanujan %.2e, Saalschutz %.2e, ", dr, ds) +
                  fmt("pentagon %.2e", pent.defect)};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4,  c5,  c6,  c7, c8,
                                                       c9, c10, c11, c12, c13, c14, c15};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
